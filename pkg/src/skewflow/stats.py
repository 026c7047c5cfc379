"""Small statistical toolkit used by the verification checks.

Only what the checks need: Wilson and normal intervals, Kolmogorov-Smirnov
tests with asymptotic p-values, a chi-square independence test and a
Poisson dispersion test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats as _sps

__all__ = [
    "Estimate",
    "wilson_interval",
    "normal_interval",
    "kolmogorov_sf",
    "ks_one_sample",
    "ks_two_sample",
    "chi2_independence",
    "poisson_dispersion",
]


@dataclass(frozen=True)
class Estimate:
    mean: float
    ci_lo: float
    ci_hi: float
    n: int
    method: str = "normal"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Estimate needs n >= 1")
        if not (self.ci_lo <= self.mean <= self.ci_hi):
            raise ValueError(f"interval [{self.ci_lo}, {self.ci_hi}] does not contain {self.mean}")
        if self.method not in ("wilson", "normal"):
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def half_width(self) -> float:
        return 0.5 * (self.ci_hi - self.ci_lo)

    def contains(self, value: float) -> bool:
        return self.ci_lo <= value <= self.ci_hi

    def as_dict(self) -> dict:
        return {"mean": self.mean, "ci_lo": self.ci_lo, "ci_hi": self.ci_hi, "n": self.n, "method": self.method}


def wilson_interval(successes: int, n: int, z: float = 1.96) -> Estimate:
    """Wilson score interval for a binomial proportion.

    The reported ``mean`` is the raw proportion ``successes / n``; the
    interval is centred on the shrunk Wilson centre.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if successes < 0 or successes > n:
        raise ValueError(f"successes={successes} outside [0, {n}]")
    if z <= 0:
        raise ValueError("z must be positive")
    p = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    centre = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == n else min(1.0, centre + half)
    # floating guard so that lo <= p <= hi always holds
    return Estimate(p, min(lo, p), max(hi, p), n, "wilson")


def normal_interval(samples, z: float = 1.96) -> Estimate:
    """Mean of ``samples`` with a normal-approximation interval."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 1:
        raise ValueError("empty sample")
    m = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return Estimate(m, m - z * se, m + z * se, n, "normal")


def kolmogorov_sf(y: float) -> float:
    """Survival function of the Kolmogorov distribution, 2 sum (-1)^(k-1) exp(-2 k^2 y^2)."""
    if y < 1.1e-16:
        return 1.0
    if y > 40.0:
        return 0.0
    x = -2.0 * y * y
    total = 0.0
    sign = 1.0
    k = 1.0
    while True:
        term = math.exp(x * k * k)
        total += sign * term
        if term == 0.0 or term / abs(total) <= 1.1e-16:
            break
        k += 1.0
        sign = -sign
    return float(min(1.0, max(0.0, 2.0 * total)))


def _stephens(en: float, d: float) -> float:
    return kolmogorov_sf((en + 0.12 + 0.11 / en) * d)


def ks_one_sample(samples, cdf: Callable[[np.ndarray], np.ndarray]) -> tuple[float, float]:
    """One-sample KS statistic against a continuous ``cdf`` and its asymptotic p-value."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("empty sample")
    f = np.clip(np.asarray(cdf(x), dtype=float), 0.0, 1.0)
    i = np.arange(1, n + 1)
    d = float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
    return d, _stephens(math.sqrt(n), d)


def ks_two_sample(a, b) -> tuple[float, float]:
    """Two-sample KS statistic (tie-aware) with asymptotic p-value."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    n1, n2 = a.size, b.size
    if n1 == 0 or n2 == 0:
        raise ValueError("empty sample")
    pooled = np.concatenate([a, b])
    cdf1 = np.searchsorted(a, pooled, side="right") / n1
    cdf2 = np.searchsorted(b, pooled, side="right") / n2
    d = float(np.max(np.abs(cdf1 - cdf2)))
    return d, _stephens(math.sqrt(n1 * n2 / (n1 + n2)), d)


def chi2_independence(table) -> tuple[float, float]:
    """Pearson chi-square test of independence on a 2-D contingency table."""
    t = np.asarray(table, dtype=float)
    if t.ndim != 2 or min(t.shape) < 2:
        raise ValueError("need at least a 2x2 table")
    rows = t.sum(axis=1)
    cols = t.sum(axis=0)
    total = t.sum()
    if total <= 0 or np.any(rows == 0) or np.any(cols == 0):
        raise ValueError("degenerate table: empty row or column")
    expected = np.outer(rows, cols) / total
    stat = float(np.sum((t - expected) ** 2 / expected))
    dof = (t.shape[0] - 1) * (t.shape[1] - 1)
    return stat, float(_sps.chi2.sf(stat, dof))


def poisson_dispersion(counts, level: float = 0.95) -> tuple[float, tuple[float, float]]:
    """Variance-to-mean ratio with the chi-square interval valid under a Poisson null.

    Under the null ``(n - 1) s^2 / mean`` is approximately chi-square with
    ``n - 1`` degrees of freedom, so the interval for the true ratio is
    ``ratio * (n - 1) / chi2_{1 - a/2}`` to ``ratio * (n - 1) / chi2_{a/2}``.
    """
    c = np.asarray(counts, dtype=float)
    n = c.size
    if n < 2:
        raise ValueError("need at least two counts")
    mean = c.mean()
    if mean <= 0:
        raise ValueError("all counts are zero")
    ratio = float(c.var(ddof=1) / mean)
    a = 1.0 - level
    dof = n - 1
    lo = ratio * dof / _sps.chi2.ppf(1 - a / 2, dof)
    hi = ratio * dof / _sps.chi2.ppf(a / 2, dof)
    return ratio, (float(lo), float(hi))
