"""Exact dynamic programming for destruction-cost moments.

Costs are driven by the toll t_n = n^alpha charged when an edge is cut
in a component of size n.  Writing K for the root-side size after the
cut (law p_{n,k} from :mod:`treecut.counts`),

    one-sided:  Y_n = t_n + Y_K                 (non-root side discarded)
    two-sided:  X_n = t_n + X_K + X*_{n-K}      (recurse on both sides)

so raw moments fill bottom-up in n via binomial/multinomial expansion:

    E Y_n^s = sum_{j<=s} C(s,j) t_n^(s-j) * sum_k p_{n,k} E Y_k^j
    E X_n^s = sum_{s1+s2+s3=s} C(s;s1,s2,s3) t_n^s1
              * sum_k p_{n,k} E X_k^s2 E X_{n-k}^s3

The size-1 boundary is a convention, not part of the toll law: by
default a size-1 component costs t_1 = 1 (so E V_1^s = 1), matching the
recursive boundary condition V_1 = t_1.  Setting ``size_one_cost=0``
charges nothing for isolated vertices, which makes the two-sided cost at
alpha = 0 exactly the number of edges, n - 1 (with the default it is
exactly 2n - 1).  The two conventions differ by a deterministic shift:
one-sided by t_1, two-sided by n * t_1.

Tables are exact Fractions whenever every toll value is rational
(integer alpha, or a rational override table), else double precision;
an 80-bit extended mode is available via ``dtype=numpy.longdouble``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from .counts import WeightedCounts
from .errors import ConfigError, OutOfRange
from .family import FamilySpec

Value = Union[Fraction, float]

ONE_SIDED = "one_sided"
TWO_SIDED = "two_sided"
_VARIANTS = (ONE_SIDED, TWO_SIDED)


@dataclass(frozen=True)
class TollSpec:
    """Toll t_n = n^alpha, an optional override table, and the size-1 cost.

    ``override`` (when given) supplies t_1..t_len(override) verbatim and
    takes precedence over alpha.  ``size_one_cost`` is the cost assigned
    to a size-1 component; None means "t_1 from the override, else 1".
    """

    alpha: float = 0.0
    override: Optional[tuple] = None
    size_one_cost: Optional[Value] = None

    def __post_init__(self):
        if self.override is None and not self.alpha >= 0:
            raise ConfigError(f"alpha must be >= 0, got {self.alpha}")
        if self.override is not None:
            if len(self.override) < 1:
                raise ConfigError("override table must supply at least t_1")
            for t in self.override:
                if not math.isfinite(float(t)):
                    raise ConfigError("override toll values must be finite")

    @property
    def t1(self) -> Value:
        if self.size_one_cost is not None:
            return self.size_one_cost
        if self.override is not None:
            return self.override[0]
        return 1

    @property
    def is_rational(self) -> bool:
        """True when every toll value (including t_1) is exactly rational."""
        if not isinstance(self.t1, (int, Fraction)):
            return False
        if self.override is not None:
            return all(isinstance(t, (int, Fraction)) for t in self.override)
        return float(self.alpha).is_integer()

    def exact_value(self, n: int) -> Fraction:
        if not self.is_rational:
            raise ConfigError("toll is not exactly rational; use float mode")
        if n == 1:
            return Fraction(self.t1)
        if self.override is not None:
            if n > len(self.override):
                raise OutOfRange(f"override table has no t_{n}")
            return Fraction(self.override[n - 1])
        return Fraction(n) ** int(self.alpha)

    def float_values(self, n_max: int, dtype=np.float64) -> np.ndarray:
        """Array t[0..n_max] with t[0] unused and t[1] the size-1 cost."""
        values = np.zeros(n_max + 1, dtype=dtype)
        if self.override is not None:
            if n_max > len(self.override):
                raise OutOfRange(f"override table has no t_{n_max}")
            values[1 : n_max + 1] = [float(t) for t in self.override[:n_max]]
        else:
            n = np.arange(n_max + 1, dtype=dtype)
            with np.errstate(divide="ignore"):
                values[1:] = n[1:] ** dtype(self.alpha)
        values[1] = float(self.t1)
        return values


@dataclass(frozen=True)
class MomentTable:
    """Raw moments E V_n^s for 1 <= n <= n_max, 0 <= s <= s_max."""

    variant: str
    family: FamilySpec
    toll: TollSpec
    n_max: int
    s_max: int
    mode: str  # "rational" | "float"
    rows: Sequence  # rows[s][n]; list of Fraction lists, or a 2-D ndarray

    def moment(self, n: int, s: int) -> Value:
        if not 1 <= n <= self.n_max:
            raise OutOfRange(f"n must be in [1, {self.n_max}], got {n}")
        if not 0 <= s <= self.s_max:
            raise OutOfRange(f"s must be in [0, {self.s_max}], got {s}")
        value = self.rows[s][n]
        return value if self.mode == "rational" else float(value)

    def row(self, s: int) -> np.ndarray:
        """Moments of order s as a float array indexed by n (index 0 = nan)."""
        if not 0 <= s <= self.s_max:
            raise OutOfRange(f"s must be in [0, {self.s_max}], got {s}")
        out = np.full(self.n_max + 1, np.nan)
        out[1:] = [float(v) for v in self.rows[s][1 : self.n_max + 1]]
        return out


def _resolve_mode(counts: WeightedCounts, toll: TollSpec, n_max: int, mode: str) -> str:
    if mode == "auto":
        return "rational" if toll.is_rational and n_max <= counts.exact_limit else "float"
    if mode == "rational":
        if not toll.is_rational:
            raise ConfigError("rational mode needs integer alpha or a rational override")
        if n_max > counts.exact_limit:
            raise ConfigError(
                f"rational mode needs exact counts up to n_max={n_max}; "
                f"have {counts.exact_limit}"
            )
        return mode
    if mode == "float":
        return mode
    raise ConfigError(f"unknown mode {mode!r}")


def _check_args(counts: WeightedCounts, n_max: int, s_max: int) -> None:
    if not 1 <= n_max <= counts.n_max:
        raise OutOfRange(f"n_max must be in [1, {counts.n_max}], got {n_max}")
    if s_max < 0:
        raise OutOfRange(f"s_max must be >= 0, got {s_max}")


def one_sided_moments(
    counts: WeightedCounts,
    toll: TollSpec,
    n_max: Optional[int] = None,
    s_max: int = 2,
    mode: str = "auto",
    dtype=np.float64,
) -> MomentTable:
    """Moment table of the one-sided (root-retaining) destruction cost."""
    n_max = counts.n_max if n_max is None else n_max
    _check_args(counts, n_max, s_max)
    resolved = _resolve_mode(counts, toll, n_max, mode)
    if resolved == "rational":
        rows = _one_sided_rational(counts, toll, n_max, s_max)
    else:
        rows = _one_sided_float(counts, toll, n_max, s_max, dtype)
    return MomentTable(ONE_SIDED, counts.family, toll, n_max, s_max, resolved, rows)


def two_sided_moments(
    counts: WeightedCounts,
    toll: TollSpec,
    n_max: Optional[int] = None,
    s_max: int = 2,
    mode: str = "auto",
    method: str = "paired",
    dtype=np.float64,
) -> MomentTable:
    """Moment table of the two-sided (recurse-everywhere) destruction cost.

    ``method="paired"`` folds the inner sums using the k <-> n-k symmetry
    of the summand; ``method="direct"`` evaluates every ordered term and
    serves as the oracle for the folded version.
    """
    n_max = counts.n_max if n_max is None else n_max
    _check_args(counts, n_max, s_max)
    if method not in ("paired", "direct"):
        raise ConfigError(f"unknown method {method!r}")
    resolved = _resolve_mode(counts, toll, n_max, mode)
    if resolved == "rational":
        rows = _two_sided_rational(counts, toll, n_max, s_max, method)
    else:
        rows = _two_sided_float(counts, toll, n_max, s_max, method, dtype)
    return MomentTable(TWO_SIDED, counts.family, toll, n_max, s_max, resolved, rows)


# ---------------------------------------------------------------------------
# Rational kernels
# ---------------------------------------------------------------------------


def _rational_frame(counts: WeightedCounts, toll: TollSpec, n_max: int, s_max: int):
    t = counts.exact
    tolls = [None] + [toll.exact_value(n) for n in range(1, n_max + 1)]
    weights = [None] + [
        counts.family.a1 * k + counts.family.a0 for k in range(1, n_max + 1)
    ]
    rows: List[List] = [[None] * (n_max + 1) for _ in range(s_max + 1)]
    for n in range(1, n_max + 1):
        rows[0][n] = Fraction(1)
    for s in range(1, s_max + 1):
        rows[s][1] = tolls[1] ** s
    return t, tolls, weights, rows


def _one_sided_rational(counts, toll, n_max, s_max):
    t, tolls, weights, rows = _rational_frame(counts, toll, n_max, s_max)
    for n in range(2, n_max + 1):
        denom = (n - 1) * t[n]
        q = [weights[k] * t[k] * t[n - k] for k in range(1, n)]
        hit = [Fraction(1)]  # hit[j] = sum_k p_{n,k} E V_k^j
        for j in range(1, s_max + 1):
            row = rows[j]
            hit.append(sum(qk * row[k] for k, qk in zip(range(1, n), q)) / denom)
        tn = tolls[n]
        tpow = [Fraction(1)]
        for _ in range(s_max):
            tpow.append(tpow[-1] * tn)
        for s in range(1, s_max + 1):
            rows[s][n] = sum(math.comb(s, j) * tpow[s - j] * hit[j] for j in range(s + 1))
    return rows


def _two_sided_rational(counts, toll, n_max, s_max, method):
    t, tolls, weights, rows = _rational_frame(counts, toll, n_max, s_max)
    pairs = [(j, l) for j in range(s_max + 1) for l in range(s_max + 1) if j + l <= s_max]
    for n in range(2, n_max + 1):
        denom = (n - 1) * t[n]
        q = [weights[k] * t[k] * t[n - k] for k in range(1, n)]
        cross = {}
        if method == "direct":
            for j, l in pairs:
                rj, rl = rows[j], rows[l]
                cross[(j, l)] = (
                    sum(qk * rj[k] * rl[n - k] for k, qk in zip(range(1, n), q)) / denom
                )
        else:
            qs = [qk + qr for qk, qr in zip(q, q[::-1])]  # q_k + q_{n-k}
            half = (n - 1) // 2
            for j, l in pairs:
                if j > l:
                    continue
                rj, rl = rows[j], rows[l]
                if j == 0 and l == 0:
                    acc = denom  # probabilities sum to one
                elif j == 0:  # rows[0] is identically 1: single-factor dots
                    acc = sum(qk * rl[n - k] for k, qk in zip(range(1, n), q))
                    acc += sum(qk * rl[k] for k, qk in zip(range(1, n), q))
                    acc /= 2
                elif j == l:
                    acc = sum(qs[k - 1] * rj[k] * rl[n - k] for k in range(1, half + 1))
                    if n % 2 == 0:
                        m = n // 2
                        acc += q[m - 1] * rj[m] * rl[m]
                else:
                    acc = sum(qs[k - 1] * rj[k] * rl[n - k] for k in range(1, n)) / 2
                cross[(j, l)] = acc / denom
                cross[(l, j)] = cross[(j, l)]  # only the sum of both orders is used
        tn = tolls[n]
        tpow = [Fraction(1)]
        for _ in range(s_max):
            tpow.append(tpow[-1] * tn)
        for s in range(1, s_max + 1):
            acc = Fraction(0)
            for s1 in range(s + 1):
                for s2 in range(s - s1 + 1):
                    s3 = s - s1 - s2
                    coeff = math.comb(s, s1) * math.comb(s - s1, s2)
                    acc += coeff * tpow[s1] * cross[(s2, s3)]
            rows[s][n] = acc
    return rows


# ---------------------------------------------------------------------------
# Float kernels
# ---------------------------------------------------------------------------


def _float_frame(counts: WeightedCounts, toll: TollSpec, n_max: int, s_max: int, dtype):
    logs = counts.log_values[: n_max + 1].astype(dtype)
    k = np.arange(n_max + 1, dtype=dtype)
    log_w = np.empty(n_max + 1, dtype=dtype)
    log_w[0] = np.nan
    log_w[1:] = np.log(dtype(float(counts.family.a1)) * k[1:] + dtype(float(counts.family.a0)))
    tolls = toll.float_values(n_max, dtype=dtype)
    values = np.zeros((s_max + 1, n_max + 1), dtype=dtype)
    values[0, 1:] = 1.0
    for s in range(1, s_max + 1):
        values[s, 1] = tolls[1] ** s
    return logs, log_w, tolls, values


def _prob_row(logs, log_w, n, dtype):
    return np.exp(log_w[1:n] + logs[1:n] + logs[n - 1 : 0 : -1] - dtype(math.log(n - 1)) - logs[n])


def _one_sided_float(counts, toll, n_max, s_max, dtype):
    logs, log_w, tolls, values = _float_frame(counts, toll, n_max, s_max, dtype)
    comb = [[math.comb(s, j) for j in range(s + 1)] for s in range(s_max + 1)]
    for n in range(2, n_max + 1):
        p = _prob_row(logs, log_w, n, dtype)
        hit = np.empty(s_max + 1, dtype=dtype)
        hit[0] = 1.0
        for j in range(1, s_max + 1):
            hit[j] = np.dot(p, values[j, 1:n])
        tn = tolls[n]
        for s in range(1, s_max + 1):
            acc = dtype(0.0)
            for j in range(s + 1):
                acc += comb[s][j] * tn ** (s - j) * hit[j]
            values[s, n] = acc
    return values


def _two_sided_float(counts, toll, n_max, s_max, method, dtype):
    logs, log_w, tolls, values = _float_frame(counts, toll, n_max, s_max, dtype)
    pairs = [(j, l) for j in range(s_max + 1) for l in range(s_max + 1) if j + l <= s_max]
    for n in range(2, n_max + 1):
        p = _prob_row(logs, log_w, n, dtype)
        cross = {}
        if method == "direct":
            for j, l in pairs:
                cross[(j, l)] = np.dot(p, values[j, 1:n] * values[l, n - 1 : 0 : -1])
        else:
            ps = p + p[::-1]
            half = (n - 1) // 2
            for j, l in pairs:
                if j > l:
                    continue
                fwd = values[j, 1:n]
                rev = values[l, n - 1 : 0 : -1]
                if j == l:
                    acc = np.dot(ps[:half], fwd[:half] * rev[:half])
                    if n % 2 == 0:
                        m = n // 2
                        acc += p[m - 1] * values[j, m] * values[l, m]
                else:
                    acc = np.dot(ps, fwd * rev) / 2
                cross[(j, l)] = acc
                cross[(l, j)] = acc
        tn = tolls[n]
        for s in range(1, s_max + 1):
            acc = dtype(0.0)
            for s1 in range(s + 1):
                for s2 in range(s - s1 + 1):
                    s3 = s - s1 - s2
                    coeff = math.comb(s, s1) * math.comb(s - s1, s2)
                    acc += coeff * tn**s1 * cross[(s2, s3)]
            values[s, n] = acc
    return values


# ---------------------------------------------------------------------------
# Centered / shifted moments
# ---------------------------------------------------------------------------


def shifted_moments(
    table: MomentTable,
    shift: Callable[[int], Value],
    s: int,
    n_values: Optional[Sequence[int]] = None,
) -> List[Value]:
    """Moments E (V_n - shift(n))^s from the raw table, by binomial expansion.

    Exact when the table is rational and the shift returns rationals.
    """
    if s > table.s_max:
        raise OutOfRange(f"need raw moments up to order {s}, table has s_max={table.s_max}")
    ns = range(1, table.n_max + 1) if n_values is None else n_values
    out: List[Value] = []
    for n in ns:
        c = shift(n)
        if table.mode == "float" or not isinstance(c, (int, Fraction)):
            c = float(c)
            acc = 0.0
            for j in range(s + 1):
                acc += math.comb(s, j) * (-c) ** (s - j) * float(table.moment(n, j))
        else:
            c = Fraction(c)
            acc = Fraction(0)
            for j in range(s + 1):
                acc += math.comb(s, j) * (-c) ** (s - j) * table.moment(n, j)
        out.append(acc)
    return out
