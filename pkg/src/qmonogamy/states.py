"""
Pure states, reduced density matrices, bipartitions and ensembles of an
n-qubit register, plus the JSON state-file format.

JSON schema::

    {"n_qubits": 3, "amplitudes": [[re, im], ...]}

with ``2**n_qubits`` amplitudes ordered by basis index (qubit 0 = MSB).
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .errors import BoundsError, DimensionError, SchemaError, ValidationError
from .linalg import MAX_QUBITS, haar_random_pure, hermitian_eig

NORM_TOL = 1e-10
LOAD_NORM_TOL = 1e-6
DM_TOL = 1e-10
ENSEMBLE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class PureState:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise BoundsError(f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        if amps.size != 2**self.n_qubits:
            raise DimensionError(
                f"{self.n_qubits} qubits need {2**self.n_qubits} amplitudes, got {amps.size}"
            )
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state norm^2 is {norm!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vec, normalize=False):
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        n = int(round(math.log2(vec.size))) if vec.size else 0
        if vec.size == 0 or 2**n != vec.size:
            raise DimensionError(f"amplitude count {vec.size} is not a power of two")
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(n, vec)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape([2] * self.n_qubits)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Density matrix over ``qubit_labels`` (ascending register indices).

    ``factor`` is an optional B with rho = B B^H. Reductions of pure states
    record it so two-qubit measures can avoid an eigendecomposition.
    """

    qubit_labels: Tuple[int, ...]
    matrix: np.ndarray
    factor: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        labels = tuple(int(q) for q in self.qubit_labels)
        d = 2 ** len(labels)
        if m.shape != (d, d):
            raise DimensionError(f"{len(labels)} qubits need a {d}x{d} matrix, got {m.shape}")
        if np.abs(m - m.conj().T).max() > DM_TOL:
            raise ValidationError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > DM_TOL:
            raise ValidationError(f"density matrix trace is {np.trace(m).real!r}")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "qubit_labels", labels)

    @property
    def n_qubits(self) -> int:
        return len(self.qubit_labels)

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eig(self.matrix).values

    def validate_psd(self):
        lo = self.eigenvalues()[0]
        if lo < -DM_TOL:
            raise ValidationError(f"density matrix has eigenvalue {lo:.3e} < 0")
        return self

    def purity(self) -> float:
        return float(np.vdot(self.matrix, self.matrix).real)


@dataclass(frozen=True)
class Bipartition:
    side_a: Tuple[int, ...]
    side_b: Tuple[int, ...]

    @classmethod
    def of(cls, side_a, n_qubits: int) -> "Bipartition":
        side_a = tuple(sorted(set(int(q) for q in side_a)))
        side_b = tuple(q for q in range(n_qubits) if q not in side_a)
        part = cls(side_a, side_b)
        part.validate(n_qubits)
        return part

    def validate(self, n_qubits: int):
        a, b = set(self.side_a), set(self.side_b)
        if not a or not b:
            raise BoundsError("both sides of a bipartition must be non-empty")
        if a & b:
            raise BoundsError(f"sides overlap on qubits {sorted(a & b)}")
        if a | b != set(range(n_qubits)):
            raise BoundsError(f"bipartition {self} does not cover qubits 0..{n_qubits - 1}")

    def swapped(self) -> "Bipartition":
        return Bipartition(self.side_b, self.side_a)


@dataclass(frozen=True, eq=False)
class Ensemble:
    probabilities: np.ndarray
    states: Tuple[np.ndarray, ...]

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if np.any(p < -NORM_TOL) or abs(p.sum() - 1.0) > NORM_TOL:
            raise ValidationError(f"ensemble probabilities {p} are not a distribution")
        for k, s in enumerate(self.states):
            if p[k] > 0 and abs(np.linalg.norm(s) - 1.0) > NORM_TOL:
                raise ValidationError(f"ensemble member {k} is not normalized")
        object.__setattr__(self, "probabilities", p)

    @property
    def members(self):
        return list(zip(self.probabilities, self.states))

    def mixture(self) -> np.ndarray:
        d = len(self.states[0])
        rho = np.zeros((d, d), dtype=complex)
        for p, s in self.members:
            rho += p * np.outer(s, s.conj())
        return rho

    def check_remixes(self, rho, tol=ENSEMBLE_TOL):
        target = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
        err = np.linalg.norm(self.mixture() - target)
        if err > tol:
            raise ValidationError(f"ensemble re-mixes with Frobenius error {err:.3e}")
        return self


def _check_keep(keep, n_qubits) -> Tuple[int, ...]:
    keep = tuple(sorted(set(int(q) for q in keep)))
    if not keep:
        raise BoundsError("keep must name at least one qubit")
    if keep[0] < 0 or keep[-1] >= n_qubits:
        raise BoundsError(f"keep={keep} out of range for {n_qubits} qubits")
    return keep


def amplitude_matrix(psi: PureState, keep) -> np.ndarray:
    """Reshape amplitudes into a (2**|keep|, 2**rest) matrix, kept qubits as rows."""
    keep = _check_keep(keep, psi.n_qubits)
    rest = [q for q in range(psi.n_qubits) if q not in keep]
    t = np.transpose(psi.tensor(), list(keep) + rest)
    return t.reshape(2 ** len(keep), -1)


def reduce(psi: PureState, keep) -> DensityMatrix:
    keep = _check_keep(keep, psi.n_qubits)
    b = amplitude_matrix(psi, keep)
    return DensityMatrix(keep, b @ b.conj().T, factor=b)


def product(*states) -> PureState:
    vec = np.array([1.0 + 0j])
    for s in states:
        vec = np.kron(vec, s.amplitudes if isinstance(s, PureState) else np.asarray(s, complex))
    return PureState.from_vector(vec, normalize=True)


def basis_state(bits: str) -> PureState:
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[int(bits, 2)] = 1.0
    return PureState(len(bits), vec)


def ghz(n: int) -> PureState:
    vec = np.zeros(2**n, dtype=complex)
    vec[0] = vec[-1] = 1 / math.sqrt(2)
    return PureState(n, vec)


def w_state(n: int) -> PureState:
    vec = np.zeros(2**n, dtype=complex)
    for q in range(n):
        vec[1 << q] = 1 / math.sqrt(n)
    return PureState(n, vec)


def bell_phi_plus() -> PureState:
    return ghz(2)


def _ghz_minus_w() -> PureState:
    return PureState.from_vector((ghz(3).amplitudes - w_state(3).amplitudes) / math.sqrt(2))


NAMED_STATES = {
    "ghz3": lambda: ghz(3),
    "w3": lambda: w_state(3),
    "ghz_minus_w": _ghz_minus_w,
}


def named_state(name: str) -> PureState:
    try:
        return NAMED_STATES[name]()
    except KeyError:
        raise LookupError(
            f"unknown state '{name}'; valid names: {', '.join(sorted(NAMED_STATES))}"
        ) from None


def state_to_dict(psi: PureState) -> dict:
    return {
        "n_qubits": psi.n_qubits,
        "amplitudes": [[float(a.real), float(a.imag)] for a in psi.amplitudes],
    }


def state_from_dict(doc, path=None) -> PureState:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object", path)
    n = doc.get("n_qubits")
    if not isinstance(n, int) or isinstance(n, bool):
        raise SchemaError("n_qubits must be an integer", path, "n_qubits")
    if not 1 <= n <= MAX_QUBITS:
        raise SchemaError(f"n_qubits must be in 1..{MAX_QUBITS}", path, "n_qubits")
    amps = doc.get("amplitudes")
    if not isinstance(amps, list):
        raise SchemaError("amplitudes must be a list of [re, im] pairs", path, "amplitudes")
    if len(amps) != 2**n:
        raise SchemaError(
            f"expected {2**n} amplitudes for n_qubits={n}, got {len(amps)}", path, "amplitudes"
        )
    vec = np.empty(len(amps), dtype=complex)
    for k, pair in enumerate(amps):
        ok = (
            isinstance(pair, list)
            and len(pair) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        )
        if not ok:
            raise SchemaError("entry must be [re, im] numbers", path, f"amplitudes[{k}]")
        vec[k] = complex(pair[0], pair[1])
    norm = float(np.linalg.norm(vec))
    if abs(norm**2 - 1.0) > LOAD_NORM_TOL:
        raise SchemaError(f"norm^2 {norm**2!r} deviates from 1 by more than 1e-6", path, "amplitudes")
    if abs(norm**2 - 1.0) > NORM_TOL:
        vec = vec / norm
    return PureState(n, vec)


def save_state(psi: PureState, path):
    # json writes floats with repr(), which round-trips doubles exactly (17 sig. digits max)
    Path(path).write_text(json.dumps(state_to_dict(psi), indent=1) + "\n")


def load_state(path) -> PureState:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc.msg} at line {exc.lineno}", str(path)) from exc
    return state_from_dict(doc, str(path))


def resolve_state(name_or_path: str) -> PureState:
    """A named state ('w3', ...) or a path to a JSON state file."""
    if name_or_path in NAMED_STATES:
        return named_state(name_or_path)
    return load_state(name_or_path)


def random_state(n_qubits: int, rng) -> PureState:
    return PureState(n_qubits, haar_random_pure(n_qubits, rng=rng))

