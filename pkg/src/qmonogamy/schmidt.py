"""
Generalized Schmidt form of a three-qubit pure state,

    l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>,

with its closed-form concurrences. Used as an analytic oracle for the
numerical measures; only the parameters -> state direction is provided.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DomainError, ValidationError
from .states import PureState

_BASIS = (0b000, 0b100, 0b101, 0b110, 0b111)
_UNDERFLOW = 1e-14


@dataclass(frozen=True)
class SchmidtParams:
    lam: Tuple[float, float, float, float, float]
    phi: float = 0.0

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lam)
        if len(lam) != 5 or min(lam) < 0:
            raise ValidationError(f"need five non-negative coefficients, got {lam}")
        if abs(sum(x * x for x in lam) - 1.0) > 1e-12:
            raise ValidationError(f"coefficients are not normalized: sum of squares {sum(x*x for x in lam)!r}")
        object.__setattr__(self, "lam", lam)


@dataclass(frozen=True)
class SchmidtAngles:
    theta: Tuple[float, float, float, float]
    phi: float = 0.0


def angles_to_params(a: SchmidtAngles) -> SchmidtParams:
    th = tuple(float(t) for t in a.theta)
    if len(th) != 4 or any(not -1e-15 <= t <= math.pi / 2 + 1e-15 for t in th):
        raise DomainError(f"angles must lie in [0, pi/2], got {th}")
    lam = []
    s = 1.0
    for t in th:
        lam.append(s * math.cos(t))
        s *= math.sin(t)
    lam.append(s)
    return SchmidtParams(tuple(lam), a.phi)


def params_to_angles(p: SchmidtParams) -> SchmidtAngles:
    """Invert the sine chain: theta_k = atan2(tail norm after k, lambda_k).

    Once the remaining sine product underflows 1e-14 every later angle is 0.
    """
    lam = p.lam
    theta = []
    s = 1.0
    for k in range(4):
        if s < _UNDERFLOW:
            theta.append(0.0)
            continue
        tail = math.sqrt(sum(x * x for x in lam[k + 1 :]))
        t = math.atan2(tail, lam[k])
        theta.append(t)
        s *= math.sin(t)
    return SchmidtAngles(tuple(theta), p.phi)


def build_state(p: SchmidtParams) -> PureState:
    amps = np.zeros(8, dtype=complex)
    for idx, lam in zip(_BASIS, p.lam):
        amps[idx] = lam
    amps[0b100] *= np.exp(1j * p.phi)
    return PureState(3, amps)


def closed_form_concurrences(p: SchmidtParams):
    """(C_{A|BC}, C_AB, C_AC) of the state built from ``p``.

    With qubit 0 as the leading bit, the |101> term links A with C and |110>
    links A with B, so C_AB = 2 l0 l3 and C_AC = 2 l0 l2. The residual only
    sees the two pairwise terms symmetrically.
    """
    l0, _, l2, l3, l4 = p.lam
    return (2 * l0 * math.sqrt(l2 * l2 + l3 * l3 + l4 * l4), 2 * l0 * l3, 2 * l0 * l2)


def residual_closed_form(p: SchmidtParams, alpha: float) -> float:
    """Residual concurrence from the angle form

        (2 l0)^a sin^a(t0) sin^a(t1) [1 - cos^a(t2) - sin^a(t2) cos^a(t3)].
    """
    l0 = p.lam[0]
    t0, t1, t2, t3 = params_to_angles(p).theta
    prefactor_base = 2 * l0 * math.sin(t0) * math.sin(t1)
    if prefactor_base < _UNDERFLOW:
        return 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        pw = lambda x: float(np.power(np.float64(x), alpha))  # noqa: E731
        bracket = 1.0 - pw(math.cos(t2)) - pw(math.sin(t2)) * pw(math.cos(t3))
        return pw(prefactor_base) * bracket


def random_angles(rng, phi=None) -> SchmidtAngles:
    theta = tuple(float(t) for t in rng.uniform(0.0, math.pi / 2, size=4))
    return SchmidtAngles(theta, float(rng.uniform(0, 2 * math.pi)) if phi is None else phi)
