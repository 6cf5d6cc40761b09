"""Controllability decisions, the exact Kalman oracle, and sampling refutation.

The graph test is one-sided: when both ``[A B]`` and its barred version are
colorable, every system in the class is controllable.  Otherwise the answer
is inconclusive unless sampling turns up an explicit uncontrollable
realization.  Nothing here ever claims a whole class is uncontrollable.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from . import linalg
from .colorrule import DEFAULT_SEARCH_BUDGET, ColorabilityResult, DerivationTrace, is_colorable
from .errors import DimensionError
from .pattern import (
    BarredSystem,
    ColorAssignment,
    ColorId,
    ColoredPatternMatrix,
    ColoredSystem,
    RationalMatrix,
    build_barred_with_map,
    instantiate,
)

STAR_POOL = tuple(Fraction(v) for v in range(-10, 11) if v != 0)
QUESTION_POOL = tuple(Fraction(v) for v in range(-10, 11))


@dataclass(frozen=True)
class SamplePlan:
    seed: int = 0
    trials: int = 1000
    star_pool: tuple[Fraction, ...] = STAR_POOL
    question_pool: tuple[Fraction, ...] = QUESTION_POOL
    zero_probability: float = 0.25

    def __post_init__(self) -> None:
        if any(v == 0 for v in self.star_pool):
            raise ValueError("star pool must not contain 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def assignments(self, colors: Sequence[ColorId]) -> Iterator[ColorAssignment]:
        rng = random.Random(self.seed)
        nonzero_q = [v for v in self.question_pool if v != 0] or [Fraction(0)]
        colors = sorted(colors)
        for _ in range(self.trials):
            values = {}
            for c in colors:
                if c.is_star:
                    values[c] = rng.choice(self.star_pool)
                elif rng.random() < self.zero_probability:
                    values[c] = Fraction(0)
                else:
                    values[c] = rng.choice(nonzero_q)
            yield ColorAssignment(values)

    def to_json(self) -> dict:
        return {"seed": self.seed, "trials": self.trials}


# --------------------------------------------------------------------------- #
# exact controllability tests


def _as_rows(M: RationalMatrix | Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    data = M.data if isinstance(M, RationalMatrix) else M
    return [[Fraction(x) for x in row] for row in data]


def kalman_matrix(A, B) -> list[list[Fraction]]:
    A, B = _as_rows(A), _as_rows(B)
    n = len(A)
    if any(len(r) != n for r in A) or len(B) != n:
        raise DimensionError("A must be n x n and B must have n rows")
    blocks = [B]
    for _ in range(n - 1):
        blocks.append(linalg.matmul(A, blocks[-1]))
    return linalg.hstack(*blocks)


def kalman_controllable(A, B) -> bool:
    """rank [B, AB, ..., A^(n-1) B] == n, exactly."""
    return linalg.full_row_rank(kalman_matrix(A, B))


def rational_eigenvalues(A) -> list[Fraction]:
    return linalg.rational_roots(linalg.charpoly(_as_rows(A)))


def hautus_at_rational_eigenvalues(A, B) -> dict[Fraction, bool]:
    """rank [lambda I - A, B] == n at each rational eigenvalue lambda of A."""
    A, B = _as_rows(A), _as_rows(B)
    n = len(A)
    out = {}
    for lam in rational_eigenvalues(A):
        shifted = [[(lam if i == j else 0) - A[i][j] for j in range(n)] for i in range(n)]
        out[lam] = linalg.full_row_rank(linalg.hstack(shifted, B))
    return out


def split_realization(sys: ColoredSystem, M: RationalMatrix) -> tuple[RationalMatrix, RationalMatrix]:
    n = sys.n
    return M.columns(range(n)), M.columns(range(n, M.cols))


def _indicator(p: int, rows: frozenset[int] | set[int]) -> list[list[Fraction]]:
    return [[Fraction(int(i == j and i + 1 in rows)) for j in range(p)] for i in range(p)]


@dataclass(frozen=True)
class StepViolation:
    step: int
    trial: int
    assignment: ColorAssignment


def check_step_rank_agreement(
    m: ColoredPatternMatrix, trace: DerivationTrace, plan: SamplePlan
) -> list[StepViolation]:
    """For each trace step compare full row rank of [M | D] and [M | D + Delta].

    D marks the rows black before the step and Delta the rows the step turns
    black.  A colorable derivation relies on the two always agreeing.
    """
    p = m.rows
    realizations = [(t, a, instantiate(m, a).data) for t, a in enumerate(plan.assignments(m.colors), 1)]
    bad = []
    for n, (black, step) in enumerate(trace.states(), start=1):
        before = _indicator(p, black)
        after = _indicator(p, black | frozenset(step.Y))
        for t, a, M in realizations:
            if linalg.full_row_rank(linalg.hstack(M, before)) != linalg.full_row_rank(linalg.hstack(M, after)):
                bad.append(StepViolation(n, t, a))
    return bad


# --------------------------------------------------------------------------- #
# verdicts


class Status(enum.Enum):
    SUFFICIENT_CONTROLLABLE = "SufficientControllable"
    INCONCLUSIVE = "Inconclusive"
    REFUTED_BY_SAMPLE = "RefutedBySample"


@dataclass(frozen=True)
class Counterexample:
    trial: int
    assignment: ColorAssignment
    realization: RationalMatrix

    def to_json(self) -> dict:
        return {
            "trial": self.trial,
            "assignment": self.assignment.to_json(),
            "matrix": self.realization.to_json(),
        }


@dataclass(frozen=True)
class SamplingReport:
    plan: SamplePlan
    trials_run: int
    counterexample: Counterexample | None = None

    @property
    def refuted(self) -> bool:
        return self.counterexample is not None

    def to_json(self) -> dict:
        return {
            "plan": self.plan.to_json(),
            "trials_run": self.trials_run,
            "counterexample": None if self.counterexample is None else self.counterexample.to_json(),
        }


@dataclass(frozen=True)
class Verdict:
    status: Status
    original: ColorabilityResult
    barred: ColorabilityResult | None
    barred_system: BarredSystem
    sampling: SamplingReport | None = None

    @property
    def failed_sides(self) -> list[str]:
        sides = []
        if self.original.colorable is not True:
            sides.append("original")
        if self.barred is None or self.barred.colorable is not True:
            sides.append("barred")
        return sides

    def to_json(self) -> dict:
        out: dict = {
            "status": self.status.value,
            "original": self.original.to_json(),
            "barred": None if self.barred is None else self.barred.to_json(),
            "barred_system": self.barred_system.to_json(),
            "failed_sides": self.failed_sides,
        }
        if self.sampling is not None:
            out["sampling"] = self.sampling.to_json()
        return out


def check_controllability(
    sys: ColoredSystem, budget: int = DEFAULT_SEARCH_BUDGET, greedy: bool = False
) -> Verdict:
    """Graph-based sufficient test: both ``[A B]`` and ``[Abar B]`` colorable."""
    barred = build_barred_with_map(sys)
    original = is_colorable(sys.matrix, budget=budget, greedy=greedy)
    bar = is_colorable(barred.system.matrix, budget=budget, greedy=greedy)
    ok = original.colorable is True and bar.colorable is True
    status = Status.SUFFICIENT_CONTROLLABLE if ok else Status.INCONCLUSIVE
    return Verdict(status, original, bar, barred)


def refute_by_sampling(sys: ColoredSystem, plan: SamplePlan) -> SamplingReport:
    """First sampled realization failing the Kalman test, if any."""
    trials = 0
    for trials, a in enumerate(plan.assignments(sys.matrix.colors), start=1):
        M = instantiate(sys.matrix, a)
        A, B = split_realization(sys, M)
        if not kalman_controllable(A, B):
            return SamplingReport(plan, trials, Counterexample(trials, a, M))
    return SamplingReport(plan, trials)


def refute_fullrank_by_sampling(m: ColoredPatternMatrix, plan: SamplePlan) -> SamplingReport:
    """First sampled realization with rank below the row count, if any."""
    if m.rows > m.cols:
        raise DimensionError(f"need p <= q, got a {m.rows}x{m.cols} matrix")
    trials = 0
    for trials, a in enumerate(plan.assignments(m.colors), start=1):
        M = instantiate(m, a)
        if not linalg.full_row_rank(M.data):
            return SamplingReport(plan, trials, Counterexample(trials, a, M))
    return SamplingReport(plan, trials)


def assess_controllability(
    sys: ColoredSystem,
    plan: SamplePlan | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
    greedy: bool = False,
) -> Verdict:
    """Graph test, followed by sampling refutation when the test is inconclusive."""
    verdict = check_controllability(sys, budget=budget, greedy=greedy)
    if verdict.status is Status.SUFFICIENT_CONTROLLABLE or plan is None or plan.trials == 0:
        return verdict
    report = refute_by_sampling(sys, plan)
    status = Status.REFUTED_BY_SAMPLE if report.refuted else Status.INCONCLUSIVE
    return Verdict(status, verdict.original, verdict.barred, verdict.barred_system, report)
