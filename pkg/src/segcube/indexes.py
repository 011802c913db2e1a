"""Binary-group segregation indexes over per-unit count vectors.

Notation: n units, t_i total population of unit i, m_i minority members of
unit i, T = sum(t_i), M = sum(m_i), P = M/T, p_i = m_i/t_i. Every index is
defined only for 0 < M < T; outside that range the cell is undefined and
callers render it as "-".

All six indexes take values in [0, 1]: 0 for a minority spread uniformly
over units (m_i/t_i = M/T everywhere), 1 for complete segregation (every
unit single-group). Values are clamped to [0, 1] to shed float dust from
the summations; the mathematics already confines them to that interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import InvalidShapeError, UndefinedCellError

DEFAULT_ATKINSON_B = 0.5


class IndexKind(str, Enum):
    """The six supported segregation indexes."""

    DISSIMILARITY = "D"
    GINI = "G"
    INFORMATION = "H"
    ISOLATION = "ISO"
    INTERACTION = "INT"
    ATKINSON = "ATK"


ALL_INDEXES: tuple[IndexKind, ...] = tuple(IndexKind)


@dataclass(frozen=True)
class CountsVector:
    """Aligned per-unit (minority, total) counts; zero-total units are dropped."""

    minority: tuple[int, ...]
    totals: tuple[int, ...]

    @staticmethod
    def from_counts(minority: Iterable[int], totals: Iterable[int]) -> "CountsVector":
        m = tuple(minority)
        t = tuple(totals)
        if len(m) != len(t):
            raise ValueError("minority and totals must have equal length")
        kept_m, kept_t = [], []
        for mi, ti in zip(m, t):
            if ti == 0:
                if mi != 0:
                    raise ValueError(f"minority {mi} in a unit with zero population")
                continue
            if mi < 0 or mi > ti:
                raise ValueError(f"need 0 <= m_i <= t_i, got m_i={mi}, t_i={ti}")
            kept_m.append(mi)
            kept_t.append(ti)
        return CountsVector(tuple(kept_m), tuple(kept_t))

    @property
    def n(self) -> int:
        return len(self.totals)

    @property
    def T(self) -> int:
        return sum(self.totals)

    @property
    def M(self) -> int:
        return sum(self.minority)

    @property
    def P(self) -> float:
        return self.M / self.T

    def is_defined(self) -> bool:
        return 0 < self.M < self.T


def _require_defined(c: CountsVector) -> None:
    if c.T == 0 or not c.is_defined():
        raise UndefinedCellError(f"index undefined for M={c.M}, T={c.T}")


def _clamp(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def dissimilarity(c: CountsVector) -> float:
    """Half the L1 distance between the minority and majority unit shares.

    D = 1/2 * sum_i | m_i/M - (t_i - m_i)/(T - M) |
    """
    _require_defined(c)
    M, T = c.M, c.T
    rest = T - M
    acc = 0.0
    for mi, ti in zip(c.minority, c.totals):
        acc += abs(mi / M - (ti - mi) / rest)
    return _clamp(acc / 2.0)


def gini(c: CountsVector) -> float:
    """Population-weighted mean absolute difference of unit minority shares.

    G = sum_i sum_j t_i t_j |p_i - p_j| / (2 T^2 P (1-P)). Evaluated by
    sorting shares, which turns the double sum into one prefix pass; the
    O(n log n) form must agree with the quadratic sum within 1e-9.
    """
    _require_defined(c)
    pairs = sorted((mi / ti, ti) for mi, ti in zip(c.minority, c.totals))
    cum_t = 0
    cum_s = 0.0
    half_num = 0.0  # sum over unordered pairs, i.e. half the double sum
    for p, t in pairs:
        half_num += t * (p * cum_t - cum_s)
        cum_t += t
        cum_s += t * p
    T = c.T
    P = c.P
    return _clamp(half_num / (T * T * P * (1.0 - P)))


def _entropy(p: float) -> float:
    # Binary entropy in nats with the 0*log(0) = 0 convention.
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)


def information(c: CountsVector) -> float:
    """Entropy-based evenness: mean per-unit entropy shortfall against E(P).

    H = sum_i t_i (E - E_i) / (T E) with E the overall binary entropy and
    E_i the entropy of unit i's minority share.
    """
    _require_defined(c)
    E = _entropy(c.P)
    acc = 0.0
    for mi, ti in zip(c.minority, c.totals):
        acc += ti * (E - _entropy(mi / ti))
    return _clamp(acc / (c.T * E))


def isolation(c: CountsVector) -> float:
    """Probability that a minority member's random unit-mate is also minority."""
    _require_defined(c)
    M = c.M
    return _clamp(sum((mi / M) * (mi / ti) for mi, ti in zip(c.minority, c.totals)))


def interaction(c: CountsVector) -> float:
    """Probability that a minority member's random unit-mate is majority."""
    _require_defined(c)
    M = c.M
    return _clamp(
        sum((mi / M) * ((ti - mi) / ti) for mi, ti in zip(c.minority, c.totals))
    )


def atkinson(c: CountsVector, b: float = DEFAULT_ATKINSON_B) -> float:
    """Atkinson index with shape parameter b in (0, 1).

    ATK = 1 - (P/(1-P)) * [ sum_i (1-p_i)^(1-b) p_i^b t_i / (P T) ]^(1/(1-b))

    The shape parameter weights units with low versus high minority shares;
    b = 0.5 treats them symmetrically.
    """
    if not 0.0 < b < 1.0:
        raise InvalidShapeError(f"Atkinson shape must be in (0, 1), got {b}")
    _require_defined(c)
    P = c.P
    acc = 0.0
    for mi, ti in zip(c.minority, c.totals):
        p = mi / ti
        acc += math.pow(1.0 - p, 1.0 - b) * math.pow(p, b) * ti
    bracket = acc / (P * c.T)
    return _clamp(1.0 - (P / (1.0 - P)) * math.pow(bracket, 1.0 / (1.0 - b)))


def compute_indexes(
    c: CountsVector,
    kinds: Iterable[IndexKind] = ALL_INDEXES,
    atkinson_b: float = DEFAULT_ATKINSON_B,
) -> Mapping[str, float | None]:
    """Evaluate the requested indexes, mapping undefined cells to None."""
    out: dict[str, float | None] = {}
    for kind in kinds:
        try:
            if kind is IndexKind.DISSIMILARITY:
                out[kind.value] = dissimilarity(c)
            elif kind is IndexKind.GINI:
                out[kind.value] = gini(c)
            elif kind is IndexKind.INFORMATION:
                out[kind.value] = information(c)
            elif kind is IndexKind.ISOLATION:
                out[kind.value] = isolation(c)
            elif kind is IndexKind.INTERACTION:
                out[kind.value] = interaction(c)
            elif kind is IndexKind.ATKINSON:
                out[kind.value] = atkinson(c, atkinson_b)
        except UndefinedCellError:
            out[kind.value] = None
    return out
