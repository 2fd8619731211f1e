"""
Optimization over pure-state decompositions of a two-qubit density matrix.

Every decomposition of rho with K members is X = V @ E where the rows of E
are sqrt(lambda_j) e_j^T for the support eigenpairs of rho and V is a K x r
isometry. The search left-multiplies V by planar rotations acting on two
members at a time, with a real and an imaginary generator per pair, and
keeps a move only when it improves the ensemble average. Minimizing bounds a
convex roof from above, maximizing bounds an assistance quantity from below;
any ensemble visited is a valid one-sided bound.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import DimensionError, ValidationError
from .linalg import haar_random_unitary, hermitian_eig, make_rng, split_seeds
from .measures import RANK_TOL, _as_two_qubit, f_of
from .states import Ensemble

MEASURES = ("concurrence", "eof")
DIRECTIONS = ("minimize", "maximize")
_ISOMETRY_TOL = 1e-10


@dataclass(frozen=True)
class RoofConfig:
    ensemble_size: Optional[int] = None  # None -> rank**2
    restarts: int = 32
    max_iters: int = 500
    step_tolerance: float = 1e-8
    seed: int = 0
    initial_step: float = 0.5


@dataclass
class RoofResult:
    value: float
    ensemble: Ensemble
    direction: str
    converged: bool
    iterations: int
    restart: int = 0
    trace: List[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "direction": self.direction,
            "converged": self.converged,
            "iterations": self.iterations,
            "restart": self.restart,
            "probabilities": [float(p) for p in self.ensemble.probabilities],
            "states": [
                [[float(a.real), float(a.imag)] for a in s] for s in self.ensemble.states
            ],
        }


def _support(rho):
    vals, vecs = hermitian_eig(rho.matrix)
    keep = vals > RANK_TOL
    if vals[0] < -1e-10:
        raise ValidationError(f"density matrix has eigenvalue {vals[0]:.3e} < 0")
    # rows sqrt(lambda_j) e_j^T
    return (vecs[:, keep] * np.sqrt(vals[keep])).T


def _entropy2(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _weighted_value(x, measure: str) -> float:
    """p * m(x / |x|) for an unnormalized two-qubit member x with p = |x|^2."""
    a, b, c, d = x
    c_weighted = 2.0 * abs(a * d - b * c)
    if measure == "concurrence":
        return c_weighted
    p = (a * a.conjugate() + b * b.conjugate() + c * c.conjugate() + d * d.conjugate()).real
    if p <= 0.0:
        return 0.0
    cn = min(1.0, c_weighted / p)
    return p * _entropy2(0.5 * (1.0 + math.sqrt(1.0 - cn * cn)))


def _pure_measure(state, measure: str) -> float:
    c = 2.0 * abs(state[0] * state[3] - state[1] * state[2])
    return c if measure == "concurrence" else f_of(min(1.0, c * c))


def ensemble_from_isometry(rho, mix) -> Ensemble:
    """Members sum_j mix[k, j] sqrt(lambda_j) |e_j>, normalized, with p_k their squared norms."""
    rho = _as_two_qubit(rho)
    e = _support(rho)
    mix = np.asarray(mix, dtype=complex)
    if mix.ndim != 2 or mix.shape[1] != e.shape[0]:
        raise DimensionError(
            f"isometry needs {e.shape[0]} columns (rank of rho), got shape {mix.shape}"
        )
    if np.abs(mix.conj().T @ mix - np.eye(mix.shape[1])).max() > _ISOMETRY_TOL:
        raise ValidationError("mixing matrix does not have orthonormal columns")
    return _ensemble(mix @ e)


def _ensemble(x) -> Ensemble:
    norms = np.linalg.norm(x, axis=1)
    p = norms**2
    states = tuple(
        x[k] / norms[k] if norms[k] > 0 else np.zeros(x.shape[1], dtype=complex)
        for k in range(x.shape[0])
    )
    return Ensemble(p / p.sum(), states)


def ensemble_value(ens: Ensemble, measure: str) -> float:
    return float(sum(p * _pure_measure(s, measure) for p, s in ens.members if p > 0))


def _search(e, measure, sign, cfg, rng, size):
    """One restart of coordinate search. ``sign`` is +1 to maximize, -1 to minimize."""
    r = e.shape[0]
    u = haar_random_unitary(size, rng)
    x = [[complex(z) for z in row] for row in u[:, :r] @ e]
    vals = [_weighted_value(row, measure) for row in x]
    total = sum(vals)
    trace = [total]
    step = cfg.initial_step
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
    iterations = 0
    converged = size == 1
    while not converged and iterations < cfg.max_iters:
        iterations += 1
        improved = False
        c, s = math.cos(step), math.sin(step)
        for i, j in pairs:
            for rot in ((c, s), (c, -s), (c, 1j * s), (c, -1j * s)):
                cc, ss = rot
                # [[c, s], [-conj(s), c]] is unitary for real and imaginary s
                ms = -ss.conjugate()
                xi = [cc * p + ss * q for p, q in zip(x[i], x[j])]
                xj = [ms * p + cc * q for p, q in zip(x[i], x[j])]
                vi, vj = _weighted_value(xi, measure), _weighted_value(xj, measure)
                delta = (vi + vj) - (vals[i] + vals[j])
                if sign * delta > 1e-15:
                    x[i], x[j] = xi, xj
                    vals[i], vals[j] = vi, vj
                    total = sum(vals)
                    improved = True
        trace.append(total)
        if not improved:
            step *= 0.5
            if step < cfg.step_tolerance:
                converged = True
    return np.array(x, dtype=complex), converged, iterations, trace


def optimize_roof(rho, measure="concurrence", direction="minimize", cfg=None) -> RoofResult:
    """
    Search decompositions of a two-qubit rho for the extreme average of ``measure``.

    Parameters
    ----------
    rho : DensityMatrix or array_like, shape (4, 4)
    measure : {"concurrence", "eof"}
    direction : {"minimize", "maximize"}
    cfg : RoofConfig, optional

    Returns
    -------
    RoofResult
        Best restart (ties go to the lower restart index). ``value`` is
        recomputed from the returned ensemble.
    """
    if measure not in MEASURES:
        raise ValueError(f"measure must be one of {MEASURES}, got {measure!r}")
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    try:
        rho = _as_two_qubit(rho)
    except DimensionError as exc:
        raise DimensionError(f"unsupported dimension for convex-roof search: {exc}") from None
    cfg = cfg or RoofConfig()
    e = _support(rho)
    rank = e.shape[0]
    size = cfg.ensemble_size or rank * rank
    if size < rank:
        raise ValidationError(f"ensemble_size {size} is below rank {rank}")
    sign = 1.0 if direction == "maximize" else -1.0

    best = None
    for idx, child in enumerate(split_seeds(cfg.seed, max(1, cfg.restarts))):
        x, converged, iters, trace = _search(e, measure, sign, cfg, make_rng(child), size)
        ens = _ensemble(x)
        value = ensemble_value(ens, measure)
        cand = RoofResult(value, ens, direction, converged, iters, idx, trace)
        if best is None or sign * (cand.value - best.value) > 0:
            best = cand
        if size == 1:
            break
    return best


def eoa_lower(rho, cfg=None) -> RoofResult:
    """Lower bound on the entanglement of assistance by maximizing average EoF."""
    return optimize_roof(rho, "eof", "maximize", cfg)
