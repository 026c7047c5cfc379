"""Lens law: tail of the maximal opening, grid census of lenses, V-identities.

Two routes to the lens law are provided. The exact route samples the distance
process (Z, J) directly. The flow route runs pairs of lattice walkers from
nearby starting points and reads their distance on the local-time clock.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numba as nb
import numpy as np

from .flow import _lattice_step, check_beta, gen_noise, run_embedded, simulate_flow, snap_even, zero_threshold
from .seeding import derive_seeds, philox
from .stats import Estimate, chi2_independence, normal_interval, poisson_dispersion, wilson_interval
from .zjprocess import BLOCK, FLOOR, HORIZON, PLAIN, Stop, ZJPath, ascent_paths, run_batch

__all__ = [
    "LensSample",
    "GridLensCensus",
    "GridCensusResult",
    "WeightFactor",
    "sample_Qxy",
    "qxy_tail",
    "sample_lens_exact",
    "lens_exact_tail",
    "grid_point_process",
    "merge_levels_stepwise",
    "independence_and_max",
    "weight_factor_estimate",
    "write_census_csv",
]


@dataclass
class LensSample:
    zpath: ZJPath
    max_opening: float
    start_gap: float
    side: int

    def __post_init__(self):
        if self.max_opening < self.start_gap:
            raise ValueError("max_opening below the starting gap")

    @property
    def coalesced(self) -> bool:
        return self.zpath.terminal == FLOOR


def _zpath_from_flow(k: np.ndarray, walk: np.ndarray, h: float, beta: float) -> ZJPath:
    """Distance of two walkers read on the local-time clock (sum of both local times)."""
    lo, hi = k[0], k[1]
    lt = ((lo - k[0, 0] - walk) + (hi - k[1, 0] - walk)) * (h / beta)
    gap = (hi - lo) * h
    merged = bool(np.any(gap == 0))
    term = FLOOR if merged else HORIZON
    if merged:
        # after the merge both walkers share every kick; drop that part
        stop = int(np.argmax(gap == 0)) + 1
        lo, hi, lt, gap = lo[:stop], hi[:stop], lt[:stop], gap[:stop]
    steps = np.nonzero(np.diff(lt) != 0)[0]  # steps carrying a kick
    if steps.size == 0:
        return ZJPath(np.zeros(1), gap[:1].astype(float), np.zeros(1, dtype=np.int64), term, beta)
    flags = np.where(lo[steps] == 0, 0, 1)
    change = np.nonzero(np.diff(flags) != 0)[0] + 1
    starts = np.concatenate([[0], change])
    # breakpoint at the start of each run of equal flags, then the final state
    t = np.concatenate([lt[steps[starts]], [lt[steps[-1] + 1]]])
    z = np.concatenate([gap[steps[starts]], [gap[steps[-1] + 1]]]).astype(float)
    j = np.concatenate([flags[starts], flags[-1:]]).astype(np.int64)
    return ZJPath(t, z, j, term, beta)


def sample_Qxy(x: float, y: float, beta: float, n_steps: int, dt: float, seed: int) -> LensSample:
    """Run the lattice flow from ``x < y`` and return the distance process of the pair.

    A pair that has not merged within ``n_steps`` carries terminal ``horizon``.
    """
    beta = check_beta(beta)
    if not x <= y:
        raise ValueError("need x <= y")
    noise = gen_noise(n_steps, dt, seed)
    fl = simulate_flow(noise, beta, [x, y])
    zp = _zpath_from_flow(fl.k, noise.walk, noise.h, beta)
    gaps = (fl.k[1] - fl.k[0]) * noise.h
    side = 0 if fl.k0[0] == 0 else (1 if fl.k0[1] == 0 else int(zp.j[0]))
    return LensSample(zp, float(gaps.max()), float(gaps[0]), side)


def qxy_tail(x: float, y: float, beta: float, h: float, v: float, replicas: int, seed: int,
             max_events: int = 10**8) -> tuple[Estimate, float, int]:
    """Estimate ``P(max opening >= v)`` for the flow pair ``(x, y)`` at mesh ``h``.

    Returns the Wilson estimate, the snapped starting gap and the number of
    replicas that hit the event cap (counted as failures).
    """
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    if not (x < y and v > 0 and h > 0):
        raise ValueError("need x < y, v > 0, h > 0")
    seeds = derive_seeds(seed, "qxy", replicas)
    r = run_embedded([x, y], beta, h, seeds, max_events=max_events, stop_gap=v)
    hits = int(np.sum(r.max_gap[:, 0] >= v - 1e-12))
    gap0 = float(r.x0[1] - r.x0[0])
    return wilson_interval(hits, replicas), gap0, int(np.sum(r.status == 2))


def sample_lens_exact(beta: float, a: float, seed: int, eps_entrance: Optional[float] = None,
                      eps_floor: Optional[float] = None) -> LensSample:
    """Exact lens conditioned on ``sup Z >= a``: entrance ascent to ``a``, then plain from ``(a, 1)``."""
    beta = check_beta(beta)
    if beta < 0:
        raise ValueError("sample_lens_exact expects beta > 0")
    if not a > 0:
        raise ValueError("a must be positive")
    eps_entrance = 1e-6 * a if eps_entrance is None else eps_entrance
    eps_floor = 1e-8 * a if eps_floor is None else eps_floor
    asc = ascent_paths(a, beta, 1, seed, eps_entrance)[0]
    k = asc.t.size - 1
    rest = run_batch(a, 1, beta, PLAIN, Stop(floor=eps_floor), 1, philox(int(seed), 7), record=True).paths[0]
    t = np.concatenate([asc.t[:k], rest.t + asc.t[k]])
    z = np.concatenate([asc.z[:k], rest.z])
    j = np.concatenate([asc.j[:k], rest.j])
    p = ZJPath(t, z, j, rest.terminal, beta, floor=eps_floor)
    return LensSample(p, float(z.max()), float(z[0]), int(j[0]))


def lens_exact_tail(beta: float, a: float, vs: Sequence[float], replicas: int, seed: int,
                    eps_floor: Optional[float] = None) -> dict:
    """``P(sup Z >= v | sup Z >= a)`` for each ``v`` in ``vs``, from exact lens samples.

    After the ascent reaches ``a`` the lens continues as the plain process from
    ``(a, 1)``, so only that continuation is simulated.
    """
    beta = check_beta(beta)
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    vs = np.asarray(vs, dtype=float)
    if np.any(vs < a):
        raise ValueError("levels must be >= a")
    eps_floor = 1e-8 * a if eps_floor is None else eps_floor
    ceil = float(vs.max())
    hits = np.zeros(vs.size, dtype=np.int64)
    nb_ = (replicas + BLOCK - 1) // BLOCK
    for bi in range(nb_):
        size = min(BLOCK, replicas - bi * BLOCK)
        r = run_batch(a, 1, abs(beta), PLAIN, Stop(ceiling=ceil, floor=eps_floor), size, philox(int(seed), bi))
        hits += (r.max_z[None, :] >= vs[:, None] - 1e-12).sum(axis=1)
    return {float(v): wilson_interval(int(c), replicas) for v, c in zip(vs, hits)}


@dataclass
class GridLensCensus:
    """Grid pairs ``(x, x + spacing)`` of one or more flow realizations."""

    spacing: float
    domain: tuple
    realization: np.ndarray
    x: np.ndarray
    max_opening: np.ndarray
    opening_level: np.ndarray

    @property
    def records(self) -> list:
        return list(zip(self.x.tolist(), self.max_opening.tolist(), self.opening_level.tolist()))


@dataclass
class GridCensusResult:
    census: GridLensCensus
    v: float
    a: float
    h: float
    counts_nonpos: np.ndarray  # per realization, x <= 0
    counts_pos: np.ndarray  # per realization, x > 0
    unresolved: int
    dispersion: float
    dispersion_ci: tuple
    window_corr: float
    window_corr_ci: tuple

    @property
    def counts(self) -> np.ndarray:
        return self.counts_nonpos + self.counts_pos

    @property
    def mean_count(self) -> Estimate:
        return normal_interval(self.counts.astype(float))

    def half_means(self) -> tuple[Estimate, Estimate]:
        return normal_interval(self.counts_nonpos.astype(float)), normal_interval(self.counts_pos.astype(float))


def _corr_ci(a: np.ndarray, b: np.ndarray, z: float = 1.96):
    n = a.size
    if n < 4 or a.std() == 0 or b.std() == 0:
        return 0.0, (-1.0, 1.0)
    r = float(np.corrcoef(a, b)[0, 1])
    r = max(min(r, 1 - 1e-12), -1 + 1e-12)
    f, se = math.atanh(r), 1.0 / math.sqrt(n - 3)
    return r, (math.tanh(f - z * se), math.tanh(f + z * se))


def grid_point_process(beta: float, n: int, a: float, v: float, realizations: int, seed: int,
                       h: Optional[float] = None, max_events: int = 10**8) -> GridCensusResult:
    """Census of grid pairs ``(x, x + 2^-n)``, ``x`` in ``(-a, a]``, with maximal opening ``>= v``.

    Each realization is one flow run of all grid points at mesh ``h``
    (default ``spacing / 8``). Realizations that hit the event cap are dropped
    and counted in ``unresolved``.
    """
    beta = check_beta(beta)
    if not a > 0:
        raise ValueError("domain (-a, a] is empty")
    if realizations < 2:
        raise ValueError("need at least two realizations")
    d = 2.0**-n
    if not d < v:
        raise ValueError("spacing must be below v")
    h = d / 8 if h is None else h
    if not 2 * h <= d:
        raise ValueError("mesh too coarse for the grid")
    xs = np.arange(-a + d, a + d + d / 2, d)
    seeds = derive_seeds(seed, "grid-census", realizations)
    r = run_embedded(xs, beta, h, seeds, max_events=max_events)
    ok = r.status == 0
    x = r.x0[:-1]
    big = r.max_gap[ok] >= v - 1e-12
    neg = big[:, x <= 1e-12].sum(axis=1)
    pos = big[:, x > 1e-12].sum(axis=1)
    tot = neg + pos
    ratio, ci = poisson_dispersion(tot)
    # two disjoint windows on the same half-line
    mid = -a / 2
    w1 = big[:, (x <= mid)].sum(axis=1)
    w2 = big[:, (x > mid) & (x <= 1e-12)].sum(axis=1)
    corr, corr_ci = _corr_ci(w1.astype(float), w2.astype(float))
    idx = np.nonzero(ok)[0]
    census = GridLensCensus(
        spacing=d,
        domain=(-a, a),
        realization=np.repeat(idx, x.size),
        x=np.tile(x, idx.size),
        max_opening=r.max_gap[ok].ravel(),
        opening_level=r.level[ok].ravel(),
    )
    return GridCensusResult(census, v, a, h, neg, pos, int((~ok).sum()), ratio, ci, corr, corr_ci)


@nb.njit(cache=True)
def _merge_levels_core(k0, thr, seed, max_steps):
    np.random.seed(seed)
    m = k0.size
    k = k0.copy()
    lev = np.full((m, m), np.iinfo(np.int64).min, dtype=np.int64)
    walk = 0
    left = m * (m - 1) // 2
    for i in range(m):
        for j in range(i + 1, m):
            if k[i] == k[j]:
                lev[i, j] = k[i] - walk
                left -= 1
    n = 0
    while left > 0 and n < max_steps:
        u = np.random.random()
        walk += 1 if u >= 0.5 else -1
        for i in range(m):
            k[i] = _lattice_step(k[i], u, thr)
        n += 1
        for i in range(m):
            for j in range(i + 1, m):
                if lev[i, j] == np.iinfo(np.int64).min and k[i] == k[j]:
                    lev[i, j] = k[i] - walk
                    left -= 1
    return lev


def merge_levels_stepwise(points, beta: float, h: float, seed: int, max_steps: int = 10**6) -> np.ndarray:
    """Merge level ``V`` of every walker pair, computed from each pair's own trajectories.

    ``V[i, j]`` (``i < j``) is ``x_i + beta * lhat_i`` at the first step where
    walkers ``i`` and ``j`` meet, in space units; NaN if they never meet
    within ``max_steps``.
    """
    beta = check_beta(beta)
    k0 = np.sort(snap_even(points, h))
    lev = _merge_levels_core(k0, zero_threshold(beta), int(seed), int(max_steps))
    out = np.where(lev == np.iinfo(np.int64).min, np.nan, lev * h)
    return out


def _quartile_bins(x: np.ndarray) -> np.ndarray:
    edges = np.quantile(x, [0.25, 0.5, 0.75])
    return np.searchsorted(edges, x, side="left")


def independence_and_max(beta: float, x: float, y: float, z: float, realizations: int, seed: int,
                         h: Optional[float] = None, max_steps: int = 10**6):
    """Chi-square p-value for independence of ``V(x,y)`` and ``V(y,z)``, and max-identity violations.

    Levels for the chi-square come from the embedded flow chain. The identity
    ``max(V(x,y), V(y,z)) = V(x,z)`` is checked on stepwise runs where each of
    the three levels is read off its own pair of trajectories. Returns
    ``(p, violations, checked, unresolved)``.
    """
    beta = check_beta(beta)
    if not (x < y < z):
        raise ValueError("need x < y < z")
    h = (y - x) / 32 if h is None else h
    k = snap_even([x, y, z], h)
    if len(set(k.tolist())) < 3:
        raise ValueError("points coincide on the lattice")
    seeds = derive_seeds(seed, "independence", realizations)
    r = run_embedded([x, y, z], beta, h, seeds)
    ok = r.status == 0
    v1, v2 = r.level[ok, 0], r.level[ok, 1]
    table = np.zeros((4, 4))
    np.add.at(table, (_quartile_bins(v1), _quartile_bins(v2)), 1)
    try:
        _, p = chi2_independence(table)
    except ValueError as exc:
        raise ValueError(f"degenerate quartile binning: {exc}") from None
    mseeds = derive_seeds(seed, "max-identity", realizations)
    violations = checked = unresolved = 0
    for s in mseeds:
        lev = merge_levels_stepwise([x, y, z], beta, h, int(s), max_steps)
        a, b, c = lev[0, 1], lev[1, 2], lev[0, 2]
        if np.isnan(a) or np.isnan(b) or np.isnan(c):
            unresolved += 1
            continue
        checked += 1
        if max(a, b) != c:
            violations += 1
    return float(p), violations, checked, unresolved + int((~ok).sum())


@dataclass
class WeightFactor:
    nonpos: Estimate
    pos: Estimate
    light_side: str
    factor: float

    def matches(self, beta: float) -> bool:
        """True if {nonpos, pos} covers {1, (1-beta)/(1+beta)} as an unordered pair."""
        f = (1 - abs(beta)) / (1 + abs(beta))
        a, b = self.nonpos, self.pos
        return (a.contains(1.0) and b.contains(f)) or (a.contains(f) and b.contains(1.0))


def weight_factor_estimate(beta: float, v: float, n: int, a: float, realizations: int, seed: int,
                           h: Optional[float] = None, min_count: int = 100) -> WeightFactor:
    """Lens counts per half-line normalized by their full-weight mean ``a / v``.

    Which half-line is light is reported, not assumed.
    """
    res = grid_point_process(beta, n, a, v, realizations, seed, h)
    if res.counts_nonpos.sum() < min_count or res.counts_pos.sum() < min_count:
        raise ValueError("too few lenses on one half-line; raise realizations or lower v")
    scale = v / a
    e_neg = normal_interval(res.counts_nonpos * scale)
    e_pos = normal_interval(res.counts_pos * scale)
    light = "x<=0" if e_neg.mean < e_pos.mean else "x>0"
    return WeightFactor(e_neg, e_pos, light, min(e_neg.mean, e_pos.mean) / max(e_neg.mean, e_pos.mean))


def write_census_csv(census: GridLensCensus, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["realization", "x", "spacing", "max_opening", "opening_level"])
        for r, x, m, lv in zip(census.realization, census.x, census.max_opening, census.opening_level):
            wr.writerow([int(r), repr(float(x)), repr(census.spacing), repr(float(m)), repr(float(lv))])
    return path
