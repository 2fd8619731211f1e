"""Property-based fuzz campaigns over Haar-random states."""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .convexroof import RoofConfig
from .linalg import make_rng
from .measures import pairwise_concurrences
from .monogamy import (
    DEFAULT_ALPHAS,
    OPTIMIZER_BACKED,
    CheckResult,
    check_ckw,
    check_dual_ckw,
    check_theorem1,
    check_theorem2,
    check_theorem4,
    check_theorem5,
)
from .schmidt import build_state, angles_to_params, random_angles, residual_closed_form
from .states import random_state

THEOREMS = ("t1", "t2", "t4", "t5", "ckw", "dual")
T2_MIN_PAIRWISE = 1e-3
WORKERS_ENV = "QMONO_WORKERS"


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


@dataclass
class TheoremSummary:
    checked: int = 0
    skipped: int = 0
    min_margin: float = math.inf
    violations: int = 0
    inconclusive: int = 0


@dataclass
class Campaign:
    rows: List[tuple]  # (state_id, CheckResult)
    summary: Dict[str, TheoremSummary] = field(default_factory=dict)

    @property
    def has_violation(self) -> bool:
        return any(
            r.is_violation for _, r in self.rows if r.theorem_id not in OPTIMIZER_BACKED
        )


def check_state(psi, theorems, alphas: Optional[Dict[str, Sequence[float]]] = None,
                cfg: Optional[RoofConfig] = None, focus: int = 0):
    """All requested checks on one state; t2 is skipped (None) unless every pairwise C > 1e-3."""
    alphas = alphas or {}
    out = {}
    for t in theorems:
        if t == "t1":
            out[t] = check_theorem1(psi, focus, alphas.get(t, DEFAULT_ALPHAS["t1"]))
        elif t == "t2":
            if min(pairwise_concurrences(psi, focus)) > T2_MIN_PAIRWISE:
                out[t] = check_theorem2(psi, focus, alphas.get(t, DEFAULT_ALPHAS["t2"]))
            else:
                out[t] = None
        elif t == "t4":
            out[t] = check_theorem4(psi, focus, alphas.get(t, DEFAULT_ALPHAS["t4"]))
        elif t == "t5":
            out[t] = [check_theorem5(psi, focus, cfg)]
        elif t == "ckw":
            out[t] = [check_ckw(psi, focus)]
        elif t == "dual":
            out[t] = [check_dual_ckw(psi, focus)]
        else:
            raise ValueError(f"unknown theorem '{t}'; choose from {', '.join(THEOREMS)}")
    return out


def _job(args):
    psi, theorems, alphas, cfg = args
    return check_state(psi, theorems, alphas, cfg)


def run_campaign(n_qubits: int, count: int, seed: int, theorems: Sequence[str] = ("t1",),
                 alphas=None, cfg: Optional[RoofConfig] = None, workers: int = 1) -> Campaign:
    """
    Draw ``count`` Haar-random states from one seeded stream and check each.

    States are generated serially so the population depends only on
    ``seed``; checks may fan out over ``workers`` processes and are merged in
    state order.
    """
    for t in theorems:
        if t not in THEOREMS:
            raise ValueError(f"unknown theorem '{t}'; choose from {', '.join(THEOREMS)}")
    rng = make_rng(seed)
    states = [random_state(n_qubits, rng) for _ in range(count)]
    jobs = [(psi, tuple(theorems), alphas, cfg) for psi in states]
    if workers > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_job, jobs, chunksize=max(1, count // (4 * workers))))
    else:
        results = [_job(j) for j in jobs]

    campaign = Campaign([], {t: TheoremSummary() for t in theorems})
    for sid, per_state in enumerate(results):
        for t in theorems:
            summ = campaign.summary[t]
            checks = per_state[t]
            if checks is None:
                summ.skipped += 1
                continue
            summ.checked += 1
            for r in checks:
                campaign.rows.append((sid, r))
                if r.outcome == "vacuous":
                    continue
                summ.min_margin = min(summ.min_margin, r.margin)
                summ.violations += r.outcome == "violation"
                summ.inconclusive += r.outcome == "inconclusive"
    return campaign


@dataclass
class SignWitness:
    alpha: float
    positive: Optional[tuple]  # (angles, residual)
    negative: Optional[tuple]
    draws: int


def sign_study(draws: int, seed: int, alpha: float = 1.0, threshold: float = 1e-6) -> SignWitness:
    """Search random Schmidt angles for residuals of both signs at a 0 < alpha < 2."""
    rng = make_rng(seed)
    pos = neg = None
    for k in range(draws):
        ang = random_angles(rng)
        value = residual_closed_form(angles_to_params(ang), alpha)
        if value > threshold and pos is None:
            pos = (ang, value)
        elif value < -threshold and neg is None:
            neg = (ang, value)
        if pos and neg:
            return SignWitness(alpha, pos, neg, k + 1)
    return SignWitness(alpha, pos, neg, draws)


def witness_state(w):
    """PureState for a (angles, residual) witness entry."""
    return build_state(angles_to_params(w[0]))


def summary_lines(campaign: Campaign) -> List[str]:
    lines = []
    for t, s in campaign.summary.items():
        mm = "n/a" if math.isinf(s.min_margin) else f"{s.min_margin:.6g}"
        lines.append(
            f"{t}: checked={s.checked} skipped={s.skipped} min_margin={mm} "
            f"violations={s.violations} inconclusive={s.inconclusive}"
        )
    return lines

