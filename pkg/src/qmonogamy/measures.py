"""
Closed-form entanglement quantities for qubit registers.

Two-qubit concurrence and concurrence of assistance use the Wootters
spectrum mu_1 >= ... >= mu_4, the square roots of the eigenvalues of
rho * spin_flip(rho). With rho = B B^H these are the singular values of the
complex-symmetric matrix T = B^T (Y (x) Y) B, so the only eigenproblem solved
is the Hermitian one for T^H T. For rank <= 2 the two singular values follow
from ||T||_F and |det T| directly, which keeps C and C_a accurate when mu_2 is
tiny.
"""

import math
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, DomainError, RegimeError, ValidationError
from .linalg import PSD_CLAMP, hermitian_eig
from .states import Bipartition, DensityMatrix, PureState, amplitude_matrix, reduce

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y).real  # real: [[0,0,0,-1],[0,0,1,0],[0,1,0,0],[-1,0,0,0]]
RANK_TOL = 1e-12
SQRT2 = math.sqrt(2.0)


class Assistance(NamedTuple):
    value: float
    exact: bool  # False when rank(rho) > 2 and the mu-sum is only an upper bound


def _as_two_qubit(rho) -> DensityMatrix:
    if not isinstance(rho, DensityMatrix):
        m = np.asarray(rho, dtype=complex)
        if m.shape != (4, 4):
            raise DimensionError(f"expected a 4x4 two-qubit matrix, got shape {m.shape}")
        rho = DensityMatrix((0, 1), m)
    if rho.n_qubits != 2:
        raise DimensionError(f"expected a two-qubit density matrix, got {rho.n_qubits} qubits")
    return rho


def _factor(rho: DensityMatrix):
    """B with rho = B B^H restricted to the numerical support, and rank(rho)."""
    if rho.factor is not None:
        b = rho.factor
        sv = np.clip(hermitian_eig(b.conj().T @ b).values, 0, None) if b.shape[1] > 2 else None
        rank = b.shape[1] if sv is None else int(np.sum(sv > RANK_TOL))
        return b, rank
    vals, vecs = hermitian_eig(rho.matrix)
    if vals[0] < -PSD_CLAMP:
        raise ValidationError(f"density matrix has eigenvalue {vals[0]:.3e} < 0")
    keep = vals > RANK_TOL
    return vecs[:, keep] * np.sqrt(vals[keep]), int(keep.sum())


def spin_flip(rho) -> np.ndarray:
    m = _as_two_qubit(rho).matrix
    return YY @ m.conj() @ YY


def wootters_spectrum(rho) -> np.ndarray:
    """mu_1 >= mu_2 >= mu_3 >= mu_4 for a two-qubit density matrix."""
    b, _ = _factor(_as_two_qubit(rho))
    t = b.T @ YY @ b
    m = t.shape[0]
    mu = np.zeros(4)
    if m == 1:
        mu[0] = abs(t[0, 0])
    elif m == 2:
        s = float(np.vdot(t, t).real)
        d = abs(t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0])
        hi, lo = math.sqrt(s + 2 * d), math.sqrt(max(0.0, s - 2 * d))
        mu[:2] = 0.5 * (hi + lo), 0.5 * (hi - lo)
    elif m > 0:
        ev = np.clip(hermitian_eig(t.conj().T @ t).values, 0, None)
        top = np.sqrt(ev[::-1])[:4]
        mu[: top.size] = top
    return mu


def _pair_terms(rho):
    """(C^2, C_a^2) from ||T||_F and |det T| when rank <= 2, else None."""
    b, rank = _factor(_as_two_qubit(rho))
    if b.shape[1] > 2:
        return None, rank
    t = b.T @ YY @ b
    if t.shape[0] == 1:
        c2 = abs(t[0, 0]) ** 2
        return (c2, c2), rank
    s = float(np.vdot(t, t).real)
    d = abs(t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0])
    return (max(0.0, s - 2 * d), s + 2 * d), rank


def concurrence_2q(rho) -> float:
    terms, _ = _pair_terms(rho)
    if terms is not None:
        return math.sqrt(terms[0])
    mu = wootters_spectrum(rho)
    return max(0.0, float(mu[0] - mu[1:].sum()))


def concurrence_2q_squared(rho) -> float:
    terms, _ = _pair_terms(rho)
    if terms is not None:
        return terms[0]
    return concurrence_2q(rho) ** 2


def coa_2q(rho) -> Assistance:
    """Concurrence of assistance as the Wootters mu-sum.

    Exact for rank <= 2 (every two-qubit reduction of a three-qubit pure
    state); for higher rank the sum is only an upper bound and ``exact`` is
    False.
    """
    terms, rank = _pair_terms(rho)
    if terms is not None:
        return Assistance(math.sqrt(terms[1]), True)
    return Assistance(float(wootters_spectrum(rho).sum()), rank <= 2)


def _check_qubit(psi: PureState, q: int, what="qubit"):
    if not 0 <= q < psi.n_qubits:
        raise DimensionError(f"{what} {q} out of range for {psi.n_qubits} qubits")


def _require_three(psi: PureState):
    if psi.n_qubits != 3:
        raise DimensionError(f"operation needs a 3-qubit state, got {psi.n_qubits} qubits")


def concurrence_pure_squared(psi: PureState, part: Bipartition) -> float:
    """2(1 - Tr rho_A^2), summed as 4 sum |2x2 minors of M|^2 (Cauchy-Binet).

    M is the amplitude matrix of the cut. The minor sum has no cancellation,
    so product states give exactly 0 instead of rounding noise.
    """
    part.validate(psi.n_qubits)
    side = min(part.side_a, part.side_b, key=len)
    m = amplitude_matrix(psi, side)
    total = 0.0
    for i in range(m.shape[0]):
        for j in range(i + 1, m.shape[0]):
            d = np.outer(m[i], m[j])
            total += float(np.sum(np.abs(d - d.T) ** 2))
    # each column pair appears twice in the antisymmetric d - d.T
    return 2.0 * total


def concurrence_pure(psi: PureState, part: Bipartition) -> float:
    return math.sqrt(concurrence_pure_squared(psi, part))


def focus_split(psi: PureState, a: int) -> Bipartition:
    _check_qubit(psi, a, "focus qubit")
    return Bipartition.of([a], psi.n_qubits)


def pair_reduction(psi: PureState, a: int, b: int) -> DensityMatrix:
    _check_qubit(psi, b, "partner qubit")
    if a == b:
        raise DimensionError("focus and partner qubit must differ")
    return reduce(psi, (a, b))


def partners(psi: PureState, a: int):
    return [q for q in range(psi.n_qubits) if q != a]


def pairwise_concurrences(psi: PureState, a: int) -> list:
    _check_qubit(psi, a, "focus qubit")
    return [concurrence_2q(pair_reduction(psi, a, b)) for b in partners(psi, a)]


def coa_via_tangle(psi: PureState, partner: int, a: int = 0) -> float:
    """C_a(rho_{a,partner}) from C^2(rho_{a,partner}) + three-tangle."""
    _require_three(psi)
    rho = pair_reduction(psi, a, partner)
    return math.sqrt(max(0.0, concurrence_2q_squared(rho) + three_tangle(psi, a)))


def binary_entropy(x: float) -> float:
    if not -1e-12 <= x <= 1 + 1e-12:
        raise DomainError(f"binary entropy needs x in [0, 1], got {x!r}")
    x = min(1.0, max(0.0, float(x)))
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def f_of(x: float) -> float:
    """H((1 + sqrt(1 - x)) / 2): EoF as a function of squared concurrence."""
    if not -1e-12 <= x <= 1 + 1e-12:
        raise DomainError(f"f needs x in [0, 1], got {x!r}")
    x = min(1.0, max(0.0, float(x)))
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - x)))


def von_neumann_entropy(rho) -> float:
    m = rho.matrix if isinstance(rho, DensityMatrix) else rho
    vals = np.clip(hermitian_eig(m).values, 0.0, None)
    vals = vals[vals > 0]
    return float(-(vals * np.log2(vals)).sum()) + 0.0


def eof_pure(psi: PureState, part: Bipartition) -> float:
    part.validate(psi.n_qubits)
    side = min(part.side_a, part.side_b, key=len)
    return max(0.0, von_neumann_entropy(reduce(psi, side)))


def eof_2q(rho) -> float:
    return f_of(concurrence_2q_squared(rho))


def three_tangle(psi: PureState, a: int = 0) -> float:
    _require_three(psi)
    total = concurrence_pure_squared(psi, focus_split(psi, a))
    for b in partners(psi, a):
        total -= concurrence_2q_squared(pair_reduction(psi, a, b))
    return total


def _power(x: float, alpha: float) -> float:
    with np.errstate(divide="ignore"):
        return float(np.power(np.float64(x), alpha))


def residual_concurrence(psi: PureState, a: int, alpha: float, diagnostic=False) -> float:
    """C^alpha_{a|rest} minus the alpha-powers of the pairwise concurrences.

    Outside alpha >= 2 the caller must pass ``diagnostic=True``.
    """
    _require_three(psi)
    if alpha < 2 and not diagnostic:
        raise RegimeError(f"residual concurrence needs alpha >= 2, got {alpha}")
    lhs = _power(concurrence_pure(psi, focus_split(psi, a)), alpha)
    return lhs - sum(_power(c, alpha) for c in pairwise_concurrences(psi, a))


def residual_eof(psi: PureState, a: int, alpha: float, diagnostic=False) -> float:
    _require_three(psi)
    if alpha < SQRT2 - 1e-12 and not diagnostic:
        raise RegimeError(f"residual EoF needs alpha >= sqrt(2), got {alpha}")
    lhs = _power(eof_pure(psi, focus_split(psi, a)), alpha)
    rest = sum(_power(eof_2q(pair_reduction(psi, a, b)), alpha) for b in partners(psi, a))
    return lhs - rest
