"""
Monogamy checkers. Each returns CheckResult records whose ``margin`` is
positive in the direction the inequality asserts.

Tolerances (one table, cited by every record):

    closed-form comparisons     1e-9
    optimizer-backed            5e-3
    classifier residual         1e-7

Optimizer-backed checks (t5, t6.ii) only have lower bounds on the
entanglement of assistance, so a negative margin is "inconclusive" unless
the closed-form lower bound f(C_a^2) already breaks the proof chain.
"""

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

from .convexroof import RoofConfig, eoa_lower
from .errors import DimensionError, RegimeError
from .measures import (
    SQRT2,
    coa_2q,
    concurrence_pure,
    eof_2q,
    eof_pure,
    f_of,
    focus_split,
    pair_reduction,
    pairwise_concurrences,
    partners,
    residual_concurrence,
    residual_eof,
    three_tangle,
)
from .states import PureState, reduce

TOLERANCE_TABLE_VERSION = "1"
TOL_CLOSED = 1e-9
TOL_OPTIMIZER = 5e-3
TOL_CLASSIFIER = 1e-7
ZERO_CONCURRENCE = 1e-9
STRICT_MARGIN = 1e-12
PURE_REDUCTION = 1e-8

OPTIMIZER_BACKED = {"t5", "t6.ii"}
INFORMATIONAL = {"t6.i.displayed"}

DEFAULT_ALPHAS = {
    "t1": (2.0, 2.5, 3.0, 4.0),
    "t2": (-2.0, -1.0, 0.0),
    "t4": (SQRT2, 1.5, 2.0, 3.0),
    "t6": (SQRT2, 1.5, 2.0, 3.0),
}
CLASSIFIER_GRID = (2.0, 2.5, 3.0, 4.0, 6.0)


def tolerance(theorem_id: str) -> float:
    return TOL_OPTIMIZER if theorem_id in OPTIMIZER_BACKED else TOL_CLOSED


@dataclass
class CheckResult:
    theorem_id: str
    alpha: Optional[float]
    lhs: float
    rhs: float
    margin: float
    passed: bool
    outcome: str  # pass | violation | inconclusive | vacuous
    focus: int = 0
    partner: Optional[int] = None
    tolerance: float = TOL_CLOSED
    informational: bool = False
    detail: Dict[str, float] = field(default_factory=dict)
    witness: Optional[str] = None

    @property
    def is_violation(self) -> bool:
        return self.outcome == "violation" and not self.informational


def _result(theorem_id, alpha, lhs, rhs, margin, focus, **kw) -> CheckResult:
    tol = tolerance(theorem_id)
    passed = margin >= -tol
    return CheckResult(
        theorem_id, alpha, lhs, rhs, margin, passed, "pass" if passed else "violation",
        focus, tolerance=tol, informational=theorem_id in INFORMATIONAL, **kw,
    )


def _power(x, alpha):
    return 0.0 if x == 0.0 and alpha > 0 else x**alpha


def _require_at_least(psi: PureState, n: int):
    if psi.n_qubits < n:
        raise DimensionError(f"check needs at least {n} qubits, got {psi.n_qubits}")


def _require_three(psi: PureState):
    if psi.n_qubits != 3:
        raise DimensionError(f"check needs exactly 3 qubits, got {psi.n_qubits}")


def _regime(alphas, ok, what):
    alphas = [float(a) for a in alphas]
    bad = [a for a in alphas if not ok(a)]
    if bad:
        raise RegimeError(f"alpha values {bad} are outside the regime {what}")
    return alphas


def check_ckw(psi: PureState, a: int = 0) -> CheckResult:
    _require_at_least(psi, 3)
    lhs = concurrence_pure(psi, focus_split(psi, a)) ** 2
    rhs = sum(c * c for c in pairwise_concurrences(psi, a))
    return _result("ckw", 2.0, lhs, rhs, lhs - rhs, a)


def check_dual_ckw(psi: PureState, a: int = 0) -> CheckResult:
    _require_at_least(psi, 3)
    lhs = concurrence_pure(psi, focus_split(psi, a)) ** 2
    coas = [coa_2q(pair_reduction(psi, a, b)) for b in partners(psi, a)]
    rhs = sum(c.value**2 for c in coas)
    res = _result("dual_ckw", 2.0, lhs, rhs, rhs - lhs, a)
    inexact = [b for b, c in zip(partners(psi, a), coas) if not c.exact]
    if inexact:
        res.detail["rank_above_two_partners"] = len(inexact)
    return res


def check_theorem1(psi: PureState, a: int = 0, alphas: Sequence[float] = DEFAULT_ALPHAS["t1"]):
    _require_at_least(psi, 3)
    alphas = _regime(alphas, lambda x: x >= 2.0, "alpha >= 2")
    c_full = concurrence_pure(psi, focus_split(psi, a))
    pairs = pairwise_concurrences(psi, a)
    out = []
    for alpha in alphas:
        lhs = _power(c_full, alpha)
        rhs = sum(_power(c, alpha) for c in pairs)
        out.append(_result("t1", alpha, lhs, rhs, lhs - rhs, a))
    return out


def check_theorem2(psi: PureState, a: int = 0, alphas: Sequence[float] = DEFAULT_ALPHAS["t2"]):
    """Reverse inequality for alpha <= 0; zero pairwise concurrences are dropped."""
    _require_at_least(psi, 3)
    alphas = _regime(alphas, lambda x: x <= 0.0, "alpha <= 0")
    c_full = concurrence_pure(psi, focus_split(psi, a))
    nonzero = [c for c in pairwise_concurrences(psi, a) if c > ZERO_CONCURRENCE]
    out = []
    for alpha in alphas:
        if not nonzero:
            out.append(CheckResult("t2", alpha, math.nan, math.nan, 0.0, True, "vacuous", a))
            continue
        lhs = c_full**alpha
        rhs = sum(c**alpha for c in nonzero)
        res = _result("t2", alpha, lhs, rhs, rhs - lhs, a)
        res.detail["strict"] = float(rhs - lhs > STRICT_MARGIN)
        res.detail["dropped_terms"] = float(psi.n_qubits - 1 - len(nonzero))
        out.append(res)
    return out


def check_theorem4(psi: PureState, a: int = 0, alphas: Sequence[float] = DEFAULT_ALPHAS["t4"]):
    _require_at_least(psi, 3)
    alphas = _regime(alphas, lambda x: x >= SQRT2 - 1e-12, "alpha >= sqrt(2)")
    e_full = eof_pure(psi, focus_split(psi, a))
    pairs = [eof_2q(pair_reduction(psi, a, b)) for b in partners(psi, a)]
    out = []
    for alpha in alphas:
        lhs = _power(e_full, alpha)
        rhs = sum(_power(e, alpha) for e in pairs)
        out.append(_result("t4", alpha, lhs, rhs, lhs - rhs, a))
    return out


def _optimizer_outcome(res: CheckResult, chain_margin: float):
    """Downgrade a failed optimizer-backed check unless the closed-form chain also fails."""
    if res.passed:
        return res
    res.outcome = "violation" if chain_margin < -TOL_CLOSED else "inconclusive"
    return res


def check_theorem5(psi: PureState, a: int = 0, cfg: Optional[RoofConfig] = None) -> CheckResult:
    """E(A|rest) <= sum of EoA over the pair reductions, with EoA bounded from below."""
    _require_at_least(psi, 3)
    cfg = cfg or RoofConfig()
    lhs = eof_pure(psi, focus_split(psi, a))
    rhs = 0.0
    chain = 0.0
    for b in partners(psi, a):
        rho = pair_reduction(psi, a, b)
        rhs += eoa_lower(rho, cfg).value
        chain += f_of(min(1.0, coa_2q(rho).value ** 2))
    res = _result("t5", None, lhs, rhs, rhs - lhs, a)
    res.detail["closed_form_chain"] = chain
    return _optimizer_outcome(res, chain - lhs)


def check_theorem6(
    psi: PureState,
    a: int = 0,
    alphas: Sequence[float] = DEFAULT_ALPHAS["t6"],
    cfg: Optional[RoofConfig] = None,
):
    """
    Both residual-EoF bounds for a three-qubit pure state.

    The first bound is reported twice: ``t6.i`` with f(tau)^alpha on the
    right, and ``t6.i.displayed`` with f(tau)^2. The two coincide at alpha = 2
    and the f^2 form is informational only.
    """
    _require_three(psi)
    alphas = _regime(alphas, lambda x: x >= SQRT2 - 1e-12, "alpha >= sqrt(2)")
    cfg = cfg or RoofConfig()
    tau = three_tangle(psi, a)
    f_tau = f_of(min(1.0, max(0.0, tau)))
    pair_data = []
    for b in partners(psi, a):
        rho = pair_reduction(psi, a, b)
        pair_data.append((b, eoa_lower(rho, cfg).value, eof_2q(rho), f_of(min(1.0, coa_2q(rho).value ** 2))))
    out = []
    for alpha in alphas:
        lhs = residual_eof(psi, a, alpha)
        out.append(_result("t6.i", alpha, lhs, f_tau**alpha, lhs - f_tau**alpha, a))
        out.append(_result("t6.i.displayed", alpha, lhs, f_tau**2, lhs - f_tau**2, a))
        for b, ea, e, f_ca in pair_data:
            rhs = _power(e, alpha) + _power(f_tau, alpha)
            res = _result("t6.ii", alpha, _power(ea, alpha), rhs, _power(ea, alpha) - rhs, a, partner=b)
            res.detail["bound"] = rhs ** (1.0 / alpha)
            res.detail["eoa_lower"] = ea
            _optimizer_outcome(res, _power(f_ca, alpha) - rhs)
            out.append(res)
    return out


def eoa_bound(psi: PureState, a: int = 0, partner: int = 1, alpha: float = SQRT2) -> float:
    """(E(rho_{a,partner})^alpha + f(three-tangle)^alpha)^(1/alpha), a lower bound on EoA."""
    _require_three(psi)
    if alpha < SQRT2 - 1e-12:
        raise RegimeError(f"EoA bound needs alpha >= sqrt(2), got {alpha}")
    e = eof_2q(pair_reduction(psi, a, partner))
    f_tau = f_of(min(1.0, max(0.0, three_tangle(psi, a))))
    return (_power(e, alpha) + _power(f_tau, alpha)) ** (1.0 / alpha)


@dataclass
class Classification:
    label: str
    residuals: Dict[int, Dict[float, float]]
    detected_alphas: List[float]
    purities: List[float]

    @property
    def note(self) -> str:
        if self.label != "genuine":
            return ""
        if min(self.detected_alphas) > 2.0:
            return "detected at alpha>2"
        return "detected at alpha=2"


def classify_pure3(psi: PureState, alpha_grid: Sequence[float] = CLASSIFIER_GRID) -> Classification:
    """
    Label a three-qubit pure state from its residual concurrences.

    Genuine when some residual over the grid and the three focus choices
    exceeds 1e-7; otherwise the pure single-qubit reductions decide which
    bipartite split holds.
    """
    _require_three(psi)
    grid = _regime(alpha_grid, lambda x: x >= 2.0, "alpha >= 2")
    if 2.0 not in grid or max(grid) <= 2.0:
        raise RegimeError("classifier grid must contain alpha = 2 and some alpha > 2")
    residuals = {q: {alpha: residual_concurrence(psi, q, alpha) for alpha in grid} for q in range(3)}
    detected = sorted(
        {alpha for q in range(3) for alpha, v in residuals[q].items() if v > TOL_CLASSIFIER}
    )
    purities = [reduce(psi, [q]).purity() for q in range(3)]
    pure = [q for q in range(3) if purities[q] > 1 - PURE_REDUCTION]
    if detected:
        label = "genuine"
    elif len(pure) == 3:
        label = "fully_product"
    elif pure:
        q = pure[0]
        rest = "".join("ABC"[k] for k in range(3) if k != q)
        label = f"separable_{'ABC'[q]}|{rest}"
    else:
        label = "undetermined"
    return Classification(label, residuals, detected, purities)


@dataclass
class MonogamyReport:
    state_descriptor: str
    focus_qubit: int
    results: List[CheckResult]
    alpha_grid: List[float]
    measures: Dict[str, object] = field(default_factory=dict)

    @property
    def has_violation(self) -> bool:
        return any(r.is_violation for r in self.results)

    def to_dict(self) -> dict:
        return {
            "state": self.state_descriptor,
            "focus_qubit": self.focus_qubit,
            "alpha_grid": self.alpha_grid,
            "measures": self.measures,
            "results": [_clean(asdict(r)) for r in self.results],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _clean(d: dict) -> dict:
    # JSON has no NaN
    return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()}


CSV_COLUMNS = ("state_id", "theorem", "alpha", "focus", "partner", "lhs", "rhs", "margin", "outcome")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "" if math.isnan(x) else f"{x:.12g}"
    return str(x)


def csv_row(state_id, r: CheckResult) -> str:
    outcome = r.outcome + ("(informational)" if r.informational else "")
    cells = (state_id, r.theorem_id, r.alpha, r.focus, r.partner, r.lhs, r.rhs, r.margin, outcome)
    return ",".join(_fmt(c) for c in cells)
