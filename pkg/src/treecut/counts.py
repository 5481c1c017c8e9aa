"""Weighted tree counts T_n and first-cut splitting distributions.

The counts satisfy the convolution recurrence

    (n-1) * T_n = sum_{k=1}^{n-1} (a1*k + a0) * T_k * T_{n-k},   T_1 = 1,

which is exactly the statement that the splitting probabilities

    p_{n,k} = (a1*k + a0) * T_k * T_{n-k} / ((n-1) * T_n)

sum to one.  T_n is kept two ways: exact Fractions up to a cutoff, and a
scaled mantissa/exponent pair (mantissa in [1,2), base-2 exponent) for
every n, because T_n grows like rho^-n and overflows doubles near
n ~ 150 already for ordered trees.  An independent oracle computes T_n
by Lagrange inversion of T(z) = z*Phi(T(z)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Union

import numpy as np

from .errors import OutOfRange, OverflowPolicyError
from .family import FamilySpec, phi_coefficient

_LN2 = math.log(2.0)

#: Hard ceiling on how many exact rationals a WeightedCounts may store.
MAX_EXACT_CUTOFF = 20_000


def _ln_fraction(x: Fraction) -> float:
    """Natural log of a positive Fraction, safe for huge numerators."""

    def ln_int(i: int) -> float:
        bits = i.bit_length()
        if bits <= 900:
            return math.log(i)
        shift = bits - 900
        return math.log(i >> shift) + shift * _LN2

    return ln_int(x.numerator) - ln_int(x.denominator)


@dataclass(frozen=True)
class WeightedCounts:
    """Counts T_1..T_n_max for one family.

    ``exact[n]`` is the exact Fraction T_n for 1 <= n <= exact_limit
    (index 0 is a placeholder).  ``log_values[n]`` is ln T_n for every
    1 <= n <= n_max.  The mantissa/exponent arrays carry
    T_n = mantissa[n] * 2**exponent[n] with mantissa in [1, 2).
    """

    family: FamilySpec
    n_max: int
    exact_cutoff: int
    exact: List[Fraction]
    log_values: np.ndarray
    mantissa: np.ndarray = field(repr=False)
    exponent: np.ndarray = field(repr=False)

    @property
    def exact_limit(self) -> int:
        return len(self.exact) - 1

    def exact_t(self, n: int) -> Fraction:
        if not 1 <= n <= self.exact_limit:
            raise OutOfRange(f"exact T_n available for 1 <= n <= {self.exact_limit}, got {n}")
        return self.exact[n]

    def log_t(self, n: int) -> float:
        if not 1 <= n <= self.n_max:
            raise OutOfRange(f"n must be in [1, {self.n_max}], got {n}")
        return float(self.log_values[n])


def compute_counts(
    spec: FamilySpec,
    n_max: int,
    exact_cutoff: int = 400,
    max_exact_cutoff: int = MAX_EXACT_CUTOFF,
) -> WeightedCounts:
    """Run the convolution recurrence in exact and scaled-float form.

    Exact Fractions are kept for n <= min(n_max, exact_cutoff); the
    mantissa/exponent (and hence ln T_n) values cover all n <= n_max.
    """
    if n_max < 1:
        raise OutOfRange(f"n_max must be >= 1, got {n_max}")
    if exact_cutoff > max_exact_cutoff:
        raise OverflowPolicyError(
            f"exact_cutoff={exact_cutoff} exceeds the configured bound {max_exact_cutoff}"
        )
    n_exact = min(n_max, exact_cutoff)

    a1, a0 = spec.a1, spec.a0
    exact: List[Fraction] = [Fraction(0), Fraction(1)]
    for n in range(2, n_exact + 1):
        acc = Fraction(0)
        for k in range(1, n):
            acc += (a1 * k + a0) * exact[k] * exact[n - k]
        exact.append(acc / (n - 1))

    # Same recurrence on (mantissa, exponent) pairs; products add exponents,
    # the sum is aligned to the largest exponent before accumulating.
    mant = np.zeros(n_max + 1)
    expo = np.zeros(n_max + 1, dtype=np.int64)
    mant[1] = 1.0
    a1f, a0f = float(a1), float(a0)
    k_all = np.arange(n_max + 1, dtype=np.float64)
    weights_all = a1f * k_all + a0f
    for n in range(2, n_max + 1):
        mm = mant[1:n] * mant[n - 1 : 0 : -1]
        ee = expo[1:n] + expo[n - 1 : 0 : -1]
        top = int(ee.max())
        total = float(np.dot(weights_all[1:n], np.ldexp(mm, ee - top)))
        m, e = math.frexp(total / (n - 1))
        mant[n] = 2.0 * m
        expo[n] = top + e - 1

    logs = np.full(n_max + 1, np.nan)
    logs[1:] = np.log(mant[1:]) + expo[1:] * _LN2

    return WeightedCounts(
        family=spec,
        n_max=n_max,
        exact_cutoff=exact_cutoff,
        exact=exact,
        log_values=logs,
        mantissa=mant,
        exponent=expo,
    )


def lagrange_counts(spec: FamilySpec, n_max: int) -> List[Fraction]:
    """Oracle: T_n = (1/n) [w^(n-1)] Phi(w)^n, exact, index 0 unused.

    O(n^3) series arithmetic; intended for cross-checks at small n_max.
    """
    phi = [phi_coefficient(spec, k) for k in range(n_max)]
    out: List[Fraction] = [Fraction(0)]
    power = [Fraction(1)] + [Fraction(0)] * (n_max - 1)  # Phi^0, truncated
    for n in range(1, n_max + 1):
        trunc = n_max
        new = [Fraction(0)] * trunc
        for i, pi in enumerate(power):
            if pi == 0:
                continue
            for j in range(min(len(phi), trunc - i)):
                if phi[j] != 0:
                    new[i + j] += pi * phi[j]
        power = new
        out.append(power[n - 1] / n)
    return out


@dataclass(frozen=True)
class SplitDistribution:
    """Law p_{n,1}..p_{n,n-1} of the root-side size after the first cut."""

    n: int
    probs: Sequence[Union[Fraction, float]]
    symmetrized: bool
    exact: bool

    def prob(self, k: int) -> Union[Fraction, float]:
        if not 1 <= k <= self.n - 1:
            raise OutOfRange(f"k must be in [1, {self.n - 1}], got {k}")
        return self.probs[k - 1]

    def as_array(self) -> np.ndarray:
        return np.array([float(p) for p in self.probs])


def split_distribution(
    counts: WeightedCounts, n: int, symmetrized: bool = False
) -> SplitDistribution:
    """Splitting law for size n, exact when the counts reach that far.

    The symmetrized variant averages p_{n,k} with p_{n,n-k}; it is
    palindromic and describes cutting when the two sides are not
    distinguished.
    """
    if not 2 <= n <= counts.n_max:
        raise OutOfRange(f"n must be in [2, {counts.n_max}], got {n}")
    spec = counts.family
    if n <= counts.exact_limit:
        t = counts.exact
        denom = (n - 1) * t[n]
        probs: List[Union[Fraction, float]] = [
            (spec.a1 * k + spec.a0) * t[k] * t[n - k] / denom for k in range(1, n)
        ]
    else:
        probs = list(_prob_row_float(counts, n))
    if symmetrized:
        rev = probs[::-1]
        probs = [(p + q) / 2 for p, q in zip(probs, rev)]
    return SplitDistribution(n=n, probs=probs, symmetrized=symmetrized, exact=n <= counts.exact_limit)


def _prob_row_float(counts: WeightedCounts, n: int) -> np.ndarray:
    """Float row p_{n,1..n-1} via exp of a log-domain combination.

    All factors are positive, so ln(a1*k + a0) + ln T_k + ln T_{n-k}
    - ln(n-1) - ln T_n is well defined and stable.
    """
    spec = counts.family
    logs = counts.log_values
    k = np.arange(1, n, dtype=np.float64)
    lw = np.log(float(spec.a1) * k + float(spec.a0))
    return np.exp(lw + logs[1:n] + logs[n - 1 : 0 : -1] - math.log(n - 1) - logs[n])
