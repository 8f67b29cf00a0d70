"""Linguistic terms over a two-generator, four-hedge algebra.

Terms are words like ``very more big``: a generator (``small`` or ``big``)
modified by a stack of hedges (``less``, ``possibly``, ``more``, ``very``).
Each term owns a sub-interval of [0, 1]; hedged children subdivide their
parent's interval, so the quantified value ``v``, the fuzziness measure
``fm`` and the nearest-term inverse lookup all fall out of one interval
model.  Everything here is immutable and deterministic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

GENERATORS = ("small", "big")
HEDGES = ("less", "possibly", "more", "very")

# less/possibly reverse a term's orientation, more/very preserve it
_HEDGE_DIR = {"less": -1, "possibly": -1, "more": 1, "very": 1}
_GENERATOR_SIGN = {"small": -1, "big": 1}

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class HedgeParams:
    """Fuzziness parameters of the algebra.

    ``fm_small``/``fm_big`` split [0, 1] between the two generators and the
    four ``mu_*`` values split every term's interval among its hedged
    children, so each group must sum to 1.  ``depth`` bounds how many hedges
    a term may carry.
    """

    fm_small: float = 0.5
    fm_big: float = 0.5
    mu_less: float = 0.25
    mu_possibly: float = 0.25
    mu_more: float = 0.25
    mu_very: float = 0.25
    depth: int = 3

    def mu(self, hedge: str) -> float:
        return getattr(self, "mu_" + hedge)

    def fm(self, generator: str) -> float:
        return getattr(self, "fm_" + generator)

    def mu_values(self) -> tuple[float, float, float, float]:
        return (self.mu_less, self.mu_possibly, self.mu_more, self.mu_very)

    def fm_values(self) -> tuple[float, float]:
        return (self.fm_small, self.fm_big)

    def validate(self, normalized: bool = True) -> None:
        """Raise ValueError unless all parameters are usable."""
        values = self.fm_values() + self.mu_values()
        if not all(np.isfinite(values)):
            raise ValueError("hedge parameters must be finite")
        if min(values) <= 0.0:
            raise ValueError("hedge parameters must be strictly positive")
        if not (isinstance(self.depth, int) and self.depth >= 1):
            raise ValueError("depth must be a positive integer")
        if normalized:
            if abs(sum(self.fm_values()) - 1.0) > _SUM_TOL:
                raise ValueError("fm_small + fm_big must sum to 1")
            if abs(sum(self.mu_values()) - 1.0) > _SUM_TOL:
                raise ValueError("hedge mu values must sum to 1")

    def as_dict(self) -> dict[str, float]:
        return {
            "fm_small": self.fm_small,
            "fm_big": self.fm_big,
            "mu_less": self.mu_less,
            "mu_possibly": self.mu_possibly,
            "mu_more": self.mu_more,
            "mu_very": self.mu_very,
        }


@dataclass(frozen=True)
class LinguisticTerm:
    """A generator with a stack of hedges, outermost first.

    ``very very more big`` is stored as generator ``big`` with hedges
    ``("very", "very", "more")``: the last hedge is the innermost one and
    applies to the generator first.
    """

    generator: str
    hedges: tuple[str, ...] = ()

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator: {self.generator!r}")
        object.__setattr__(self, "hedges", tuple(self.hedges))
        for h in self.hedges:
            if h not in HEDGES:
                raise ValueError(f"unknown hedge: {h!r}")

    @property
    def depth(self) -> int:
        return len(self.hedges)

    @property
    def sign(self) -> int:
        s = _GENERATOR_SIGN[self.generator]
        for h in self.hedges:
            s *= _HEDGE_DIR[h]
        return s

    def __str__(self) -> str:
        return " ".join(self.hedges + (self.generator,))


@dataclass(frozen=True)
class TermSemantics:
    """A term with its interval, quantified value and fuzziness."""

    term: LinguisticTerm
    lo: float
    hi: float
    v: float
    fm: float

    @property
    def interval(self) -> tuple[float, float]:
        return (self.lo, self.hi)


def _root_block(generator: str, params: HedgeParams) -> tuple[float, float, int]:
    if generator == "small":
        return 0.0, params.fm_small, -1
    return params.fm_small, 1.0, 1


def _child_layout(lo: float, hi: float, sign: int, params: HedgeParams):
    """Ascending blocks of the four hedged children inside [lo, hi].

    A positive parent lays out less | possibly | more | very; a negative
    parent mirrors the order.  The last boundary is snapped to the parent's
    upper end so siblings tile the parent exactly.
    """
    width = hi - lo
    order = HEDGES if sign > 0 else tuple(reversed(HEDGES))
    bounds = [lo]
    for h in order:
        bounds.append(bounds[-1] + params.mu(h) * width)
    bounds[-1] = hi
    return order, bounds


def _value_in(lo: float, hi: float, sign: int, params: HedgeParams) -> float:
    alpha = params.mu_less + params.mu_possibly
    beta = params.mu_more + params.mu_very
    return lo + (alpha if sign > 0 else beta) * (hi - lo)


def enumerate_terms(params: HedgeParams) -> list[TermSemantics]:
    """All terms of hedge depth 0..depth, sorted ascending by value.

    For depth 3 that is 2 * (1 + 4 + 16 + 64) = 170 terms.  Ties on the
    value sort by fewer hedges, then by hedge spelling.
    """
    params.validate()
    out: list[TermSemantics] = []
    stack = [(LinguisticTerm(g), *_root_block(g, params)) for g in GENERATORS]
    while stack:
        term, lo, hi, sign = stack.pop()
        out.append(TermSemantics(term, lo, hi, _value_in(lo, hi, sign, params), hi - lo))
        if term.depth < params.depth:
            order, bounds = _child_layout(lo, hi, sign, params)
            for i, h in enumerate(order):
                child = LinguisticTerm(term.generator, (h,) + term.hedges)
                stack.append((child, bounds[i], bounds[i + 1], _HEDGE_DIR[h] * sign))
    out.sort(key=lambda s: (s.v, s.term.depth, s.term.hedges))
    return out


def quantify(term: LinguisticTerm, params: HedgeParams) -> float:
    """Quantified value of a term, by walking its interval down from the generator."""
    params.validate()
    if term.depth > params.depth:
        raise ValueError(f"term depth {term.depth} exceeds bound {params.depth}")
    lo, hi, sign = _root_block(term.generator, params)
    for h in reversed(term.hedges):  # innermost hedge applies first
        order, bounds = _child_layout(lo, hi, sign, params)
        i = order.index(h)
        lo, hi = bounds[i], bounds[i + 1]
        sign = _HEDGE_DIR[h] * sign
    return _value_in(lo, hi, sign, params)


def fuzziness_measure(term: LinguisticTerm, params: HedgeParams) -> float:
    """fm(generator) times the product of the hedges' mu values."""
    params.validate()
    if term.depth > params.depth:
        raise ValueError(f"term depth {term.depth} exceeds bound {params.depth}")
    fm = params.fm(term.generator)
    for h in term.hedges:
        fm *= params.mu(h)
    return fm


class TermTable:
    """Enumerated term table with vectorized nearest-term lookup.

    Terms sharing an identical value are collapsed to one representative
    (fewest hedges, then lexicographic hedge spelling); a query exactly
    halfway between two values resolves by fewer hedges, then smaller value.
    """

    def __init__(self, params: HedgeParams):
        self.params = params
        self.terms = enumerate_terms(params)

        reps: list[TermSemantics] = []
        for sem in self.terms:  # sorted by (v, depth, hedges): first of a v-group wins
            if not reps or sem.v != reps[-1].v:
                reps.append(sem)
        self.rep_terms = reps
        self.rep_v = np.array([s.v for s in reps])
        self.rep_fm = np.array([s.fm for s in reps])
        self.rep_depth = np.array([s.term.depth for s in reps])
        self.rep_hedge_counts = np.array(
            [[s.term.hedges.count(h) for h in HEDGES] for s in reps], dtype=np.float64
        )
        self.rep_generator_index = np.array(
            [GENERATORS.index(s.term.generator) for s in reps]
        )
        # midpoint winner for each adjacent pair: fewer hedges, else the lower value
        d = self.rep_depth
        self._gap_winner = np.where(d[1:] < d[:-1], np.arange(1, len(reps)), np.arange(len(reps) - 1))

    def nearest_indices(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=np.float64)
        if q.size and (q.min() < 0.0 or q.max() > 1.0):
            raise ValueError("query values must lie in [0, 1]")
        last = len(self.rep_v) - 1
        pos = np.searchsorted(self.rep_v, q)
        lo = np.clip(pos - 1, 0, last)
        hi = np.clip(pos, 0, last)
        d_lo = np.abs(q - self.rep_v[lo])
        d_hi = np.abs(self.rep_v[hi] - q)
        idx = np.where(d_hi < d_lo, hi, lo)
        ties = (d_hi == d_lo) & (hi != lo)
        if np.any(ties):
            idx[ties] = self._gap_winner[lo[ties]]
        return idx

    def nearest(self, q: float) -> TermSemantics:
        return self.rep_terms[int(self.nearest_indices(np.array([q]))[0])]

    def confidence(self, q) -> np.ndarray:
        return self.rep_fm[self.nearest_indices(q)]

    def mapping_error(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=np.float64)
        return np.abs(self.rep_v[self.nearest_indices(q)] - q)


@lru_cache(maxsize=128)
def term_table(params: HedgeParams) -> TermTable:
    return TermTable(params)


def inverse_quantify(q: float, params: HedgeParams) -> tuple[LinguisticTerm, float, float]:
    """The bounded-depth term whose value is nearest to q, with its v and fm."""
    sem = term_table(params).nearest(float(q))
    return sem.term, sem.v, sem.fm


def mapping_error(q: float, params: HedgeParams) -> float:
    """|v(nearest term) - q|, the semantic mapping error of a real value."""
    return float(term_table(params).mapping_error(np.array([float(q)]))[0])


def confidence(q: float, params: HedgeParams) -> float:
    """Fuzziness of the term nearest to q; always in (0, 1]."""
    return float(term_table(params).confidence(np.array([float(q)]))[0])


def apply_error_update(params: HedgeParams, term: LinguisticTerm, e: float) -> HedgeParams:
    """Grow the parameters that built ``term`` by the mapping error.

    Each hedge's mu gains e per occurrence and the generator's fm gains e.
    The result is intentionally unnormalized; run a batch of updates, then
    call :func:`normalize_params` once.
    """
    if e < 0:
        raise ValueError("error must be nonnegative")
    counts = Counter(term.hedges)
    updates = {"mu_" + h: params.mu(h) + counts[h] * e for h in HEDGES if counts[h]}
    updates["fm_" + term.generator] = params.fm(term.generator) + e
    return replace(params, **updates)


def normalize_params(params: HedgeParams) -> HedgeParams:
    """Rescale mu values and fm values so each group sums to 1."""
    params.validate(normalized=False)
    fm_sum = params.fm_small + params.fm_big
    mu_sum = sum(params.mu_values())
    return replace(
        params,
        fm_small=params.fm_small / fm_sum,
        fm_big=params.fm_big / fm_sum,
        mu_less=params.mu_less / mu_sum,
        mu_possibly=params.mu_possibly / mu_sum,
        mu_more=params.mu_more / mu_sum,
        mu_very=params.mu_very / mu_sum,
    )
