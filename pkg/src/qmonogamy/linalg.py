"""
Dense complex linear algebra for small qubit registers (dimension <= 64).

Index convention: qubit 0 is the most significant bit of a computational
basis index, so |q0 q1 ... q_{n-1}> is basis state q0*2**(n-1) + ... + q_{n-1}.
Every reshape into per-qubit tensor axes below relies on this ordering.
"""

from typing import NamedTuple, Sequence

import numpy as np

from .errors import BoundsError, DimensionError, NotPSDError, NumericalError

HERMITIAN_TOL = 1e-12
PSD_CLAMP = 1e-10
MAX_DIM = 64
MAX_QUBITS = 6

_OFFDIAG_REL = 1e-13
_MAX_SWEEPS = 100


class EigenResult(NamedTuple):
    values: np.ndarray  # ascending, real
    vectors: np.ndarray  # orthonormal columns


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitian_eig(m) -> EigenResult:
    """
    Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    The input is symmetrized as (M + M^H)/2 first. Sweeps continue until every
    off-diagonal magnitude is below 1e-13 * ||M||_F.

    Parameters
    ----------
    m : array_like, shape (d, d)
        Hermitian matrix.

    Returns
    -------
    EigenResult
        ``values`` ascending, ``vectors`` with the matching eigenvectors as columns.

    Raises
    ------
    DimensionError
        If ``m`` is not square.
    NumericalError
        If the sweep cap is reached before convergence.
    """
    a = _square(m)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a)
    thresh = _OFFDIAG_REL * norm
    if n > 1 and norm > 0:
        for _ in range(_MAX_SWEEPS):
            off = np.abs(a - np.diag(np.diag(a)))
            if off.max() < thresh:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    mag = abs(apq)
                    if mag < thresh:
                        continue
                    phase = apq / mag
                    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                    c = 1.0 / np.hypot(t, 1.0)
                    s = t * c
                    # U = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                    u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                    idx = [p, q]
                    a[:, idx] = a[:, idx] @ u
                    a[idx, :] = u.conj().T @ a[idx, :]
                    a[p, q] = a[q, p] = 0.0
                    v[:, idx] = v[:, idx] @ u
        else:
            off = np.abs(a - np.diag(np.diag(a))).max()
            raise NumericalError(
                f"Jacobi sweeps did not converge: off-diagonal residual {off:.3e}"
            )
    values = np.diag(a).real.copy()
    order = np.argsort(values, kind="stable")
    return EigenResult(values[order], v[:, order])


def psd_sqrt(m) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower raises
    NotPSDError.
    """
    vals, vecs = hermitian_eig(m)
    if vals.size and vals[0] < -PSD_CLAMP:
        raise NotPSDError(f"matrix is not PSD: smallest eigenvalue {vals[0]:.3e}")
    roots = np.sqrt(np.clip(vals, 0.0, None))
    r = (vecs * roots) @ vecs.conj().T
    return 0.5 * (r + r.conj().T)


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Kept subsystems appear in ascending index order in the result.
    """
    rho = _square(rho)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims)) if dims else 0
    if total != rho.shape[0]:
        raise DimensionError(
            f"subsystem dims {dims} multiply to {total}, matrix dimension is {rho.shape[0]}"
        )
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionError(f"keep={keep} must be a non-empty subset of 0..{len(dims) - 1}")
    n = len(dims)
    t = rho.reshape(dims + dims)
    # trace highest axes first so lower axis numbers stay valid
    for k in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=k, axis2=k + t.ndim // 2)
    d = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d, d)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator seeded from a 64-bit unsigned integer.

    numpy's PCG64 stream is fixed for a given seed across platforms, which
    keeps fuzz failures reproducible.
    """
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise BoundsError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def split_seeds(seed: int, count: int) -> list:
    """Derive ``count`` independent child seeds via SeedSequence.spawn."""
    children = np.random.SeedSequence(int(seed)).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def haar_random_pure(n_qubits: int, seed=None, rng=None) -> np.ndarray:
    """Haar-random state vector: i.i.d. standard complex Gaussians, normalized.

    Pass either a ``seed`` or an existing ``rng`` to draw from a shared stream.
    """
    if not 1 <= int(n_qubits) <= MAX_QUBITS:
        raise BoundsError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n_qubits}")
    if rng is None:
        rng = make_rng(0 if seed is None else seed)
    d = 2 ** int(n_qubits)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def haar_random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
