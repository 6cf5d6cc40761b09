"""Brute-force oracles that do not rely on the matching-class argument.

* :func:`symbolic_determinant` expands ``det(N)`` as an integer polynomial in
  the color variables, summing over perfect matchings.
* :func:`leibniz_determinant` does the same over all ``t!`` permutations and
  serves as the independent cross-check of the matching route.
* :func:`find_singular_assignment` hunts for an explicit rational realization
  with zero determinant.
* :func:`permanent_01` counts perfect matchings by inclusion-exclusion.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import linalg
from .errors import BudgetExceeded, DimensionError, WitnessNotFound
from .matching import (
    ColoredBipartiteGraph,
    build_bipartite,
    enumerate_perfect_matchings,
    permutation_sign,
)
from .pattern import ColorAssignment, ColorId, ColoredPatternMatrix, instantiate
from .verification import QUESTION_POOL, STAR_POOL

Monomial = tuple[tuple[ColorId, int], ...]  # sorted (variable, exponent>0) pairs

DETERMINANT_SIZE_BUDGET = 10
PERMANENT_SIZE_BUDGET = 12


def _monomial(colors: Iterable[ColorId]) -> Monomial:
    return tuple(sorted(Counter(colors).items()))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    acc = Counter(dict(a))
    acc.update(dict(b))
    return tuple(sorted(acc.items()))


def _mono_token(mono: Monomial) -> str:
    if not mono:
        return "1"
    return "*".join(c.token if e == 1 else f"{c.token}^{e}" for c, e in mono)


@dataclass(frozen=True)
class ColorPolynomial:
    """Sparse polynomial with integer coefficients over color variables."""

    terms: Mapping[Monomial, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {m: c for m, c in sorted(self.terms.items()) if c != 0}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls) -> ColorPolynomial:
        return cls({})

    @classmethod
    def constant(cls, c: int) -> ColorPolynomial:
        return cls({(): c})

    @classmethod
    def variable(cls, color: ColorId) -> ColorPolynomial:
        return cls({((color, 1),): 1})

    @classmethod
    def from_products(cls, items: Iterable[tuple[int, Iterable[ColorId]]]) -> ColorPolynomial:
        acc: Counter[Monomial] = Counter()
        for coeff, colors in items:
            acc[_monomial(colors)] += coeff
        return cls(dict(acc))

    def __add__(self, other: ColorPolynomial) -> ColorPolynomial:
        acc = Counter(self.terms)
        acc.update(other.terms)
        return ColorPolynomial(dict(acc))

    def __neg__(self) -> ColorPolynomial:
        return ColorPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: ColorPolynomial) -> ColorPolynomial:
        return self + (-other)

    def __mul__(self, other: ColorPolynomial) -> ColorPolynomial:
        acc: Counter[Monomial] = Counter()
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                acc[_mono_mul(ma, mb)] += ca * cb
        return ColorPolynomial(dict(acc))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColorPolynomial):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> list[ColorId]:
        return sorted({c for m in self.terms for c, _ in m})

    def evaluate(self, values: Mapping[ColorId, Fraction] | ColorAssignment) -> Fraction:
        if isinstance(values, ColorAssignment):
            values = values.values
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            term = Fraction(coeff)
            for color, e in mono:
                term *= Fraction(values[color]) ** e
            total += term
        return total

    def univariate(self, var: ColorId, values: Mapping[ColorId, Fraction]) -> list[Fraction]:
        """Substitute every variable except ``var``; coefficients highest degree first."""
        by_degree: Counter[int] = Counter()
        for mono, coeff in self.terms.items():
            term = Fraction(coeff)
            degree = 0
            for color, e in mono:
                if color == var:
                    degree = e
                else:
                    term *= Fraction(values[color]) ** e
            by_degree[degree] += term
        top = max(by_degree, default=0)
        return [by_degree.get(d, Fraction(0)) for d in range(top, -1, -1)]

    def to_json(self) -> list[list]:
        return [[_mono_token(m), c] for m, c in self.terms.items()]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self.terms.items():
            body = _mono_token(mono)
            if body == "1":
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


def _check_square(m: ColoredPatternMatrix, budget: int) -> None:
    if not m.is_square:
        raise DimensionError(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
    if m.rows > budget:
        raise BudgetExceeded(f"matrix size {m.rows} exceeds determinant budget {budget}")


def symbolic_determinant(
    m: ColoredPatternMatrix, budget: int = DETERMINANT_SIZE_BUDGET
) -> ColorPolynomial:
    """det(N) with each nonzero cell replaced by its color variable."""
    _check_square(m, budget)
    g = build_bipartite(m)
    return ColorPolynomial.from_products(
        (p.sign, (g.color(x, y) for x, y in p.edges())) for p in enumerate_perfect_matchings(g)
    )


def leibniz_determinant(
    m: ColoredPatternMatrix, budget: int = DETERMINANT_SIZE_BUDGET
) -> ColorPolynomial:
    """Same polynomial, summed over every permutation of the columns."""
    _check_square(m, budget)
    t = m.rows
    items = []
    for perm in itertools.permutations(range(t)):
        cells = [m[perm[i], i] for i in range(t)]
        if all(c is not None for c in cells):
            items.append((permutation_sign([v + 1 for v in perm]), cells))
    return ColorPolynomial.from_products(items)


def single_solid_monomial(p: ColorPolynomial) -> bool:
    if len(p.terms) != 1:
        return False
    ((mono, coeff),) = p.terms.items()
    return coeff != 0 and all(c.is_star for c, _ in mono)


def find_singular_assignment(
    m: ColoredPatternMatrix, budget: int = 200, seed: int = 0
) -> ColorAssignment:
    """Search for a realization of ``m`` with determinant exactly zero.

    Each trial draws random values for all colors but one, then solves the
    remaining univariate equation for its rational roots.  Raises
    :class:`WitnessNotFound` when ``budget`` trials pass without a witness;
    that is not evidence that none exists.
    """
    poly = symbolic_determinant(m)
    colors = list(m.colors)
    rng = random.Random(seed)

    def draw() -> dict[ColorId, Fraction]:
        return {
            c: rng.choice(STAR_POOL) if c.is_star else rng.choice(QUESTION_POOL) for c in colors
        }

    def accept(values: dict[ColorId, Fraction]) -> ColorAssignment | None:
        a = ColorAssignment(values)
        if linalg.det(instantiate(m, a).data) == 0:
            return a
        return None

    if poly.is_zero:
        found = accept(draw() if colors else {})
        if found is not None:
            return found
    for question in (c for c in colors if not c.is_star):
        values = {c: Fraction(1) for c in colors}
        values[question] = Fraction(0)
        if poly.evaluate(values) == 0:
            return accept(values)  # type: ignore[return-value]
    variables = poly.variables()
    for trial in range(budget):
        values = draw()
        if not variables:
            break
        var = variables[trial % len(variables)]
        for root in linalg.rational_roots(poly.univariate(var, values)):
            if var.is_star and root == 0:
                continue
            values[var] = root
            found = accept(values)
            if found is not None:
                return found
    raise WitnessNotFound(f"no singular realization found in {budget} trials", budget)


def permanent_01(g: ColoredBipartiteGraph, budget: int = PERMANENT_SIZE_BUDGET) -> int:
    """Number of perfect matchings, by inclusion-exclusion over column subsets."""
    t = g.size
    if t > budget:
        raise BudgetExceeded(f"graph size {t} exceeds permanent budget {budget}")
    a = g.biadjacency()  # a[x][y]
    # perm = (-1)^t * sum_S (-1)^|S| prod_y sum_{x in S} a[x][y]
    total = 0
    for mask in range(1 << t):
        cols = [x for x in range(t) if mask >> x & 1]
        prod = 1
        for y in range(t):
            prod *= sum(a[x][y] for x in cols)
            if prod == 0:
                break
        total += (-1) ** len(cols) * prod
    return (-1) ** t * total
