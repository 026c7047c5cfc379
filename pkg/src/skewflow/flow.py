"""Coupled lattice flow of skew random walks driven by one shared noise.

Every walker lives on the lattice ``h * Z`` (``h = sqrt(dt)``) and reads the
same uniform ``U_k`` at step ``k``. Off zero a walker follows the driving
increment ``xi_k = +h if U_k >= 1/2 else -h``; at zero it goes up iff
``U_k >= (1 - beta) / 2``. Starting points are snapped to ``2h Z`` so all
walkers share parity, which makes the flow exactly monotone and coalescing.

Positions are kept as integer multiples of ``h``; the discrete local time is
defined through the identity ``X_n = x0 + B_n + beta * lhat_n``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numba as nb
import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d

from .seeding import philox

__all__ = [
    "SkewParam",
    "NoisePath",
    "WalkerPath",
    "FlowPaths",
    "check_beta",
    "zero_threshold",
    "gen_noise",
    "step_walker",
    "snap_even",
    "simulate_flow",
    "coalescence_step",
    "gap_structure",
    "modulus_check",
    "modulus_excess",
    "modulus_report",
    "write_flow_csv",
    "pair_max_gap_stepwise",
    "EmbeddedRun",
    "run_embedded",
]


def check_beta(beta: float) -> float:
    beta = float(beta)
    if not (0.0 < abs(beta) < 1.0) or math.isnan(beta):
        raise ValueError(f"skewness beta must satisfy 0 < |beta| < 1, got {beta}")
    return beta


@dataclass(frozen=True)
class SkewParam:
    beta: float

    def __post_init__(self):
        check_beta(self.beta)

    def __float__(self) -> float:
        return float(self.beta)


def zero_threshold(beta: float) -> float:
    """Uniform threshold at zero: the walker goes up iff ``u >= (1 - beta)/2``."""
    return (1.0 - beta) / 2.0


@dataclass(frozen=True)
class NoisePath:
    n_steps: int
    dt: float
    h: float
    uniforms: np.ndarray = field(repr=False)
    seed: int

    @cached_property
    def up(self) -> np.ndarray:
        return self.uniforms >= 0.5

    @cached_property
    def walk(self) -> np.ndarray:
        """Driving walk in lattice units, length ``n_steps + 1`` starting at 0."""
        out = np.zeros(self.n_steps + 1, dtype=np.int64)
        np.cumsum(np.where(self.up, 1, -1), out=out[1:])
        return out

    @property
    def xi(self) -> np.ndarray:
        return np.where(self.up, self.h, -self.h)

    @property
    def B(self) -> np.ndarray:
        return self.walk * self.h


def gen_noise(n_steps: int, dt: float, seed: int) -> NoisePath:
    """Draw ``n_steps`` uniforms in the open interval (0, 1) from a Philox stream."""
    n_steps = int(n_steps)
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if not dt > 0:
        raise ValueError("dt must be positive")
    rng = philox(int(seed))
    # midpoints of a 2^53 grid: never 0, never 1
    u = (rng.integers(0, 1 << 53, size=n_steps, dtype=np.int64).astype(np.float64) + 0.5) / float(1 << 53)
    u.setflags(write=False)
    return NoisePath(n_steps, float(dt), math.sqrt(dt), u, int(seed))


def step_walker(pos: float, u: float, beta: float, h: float) -> float:
    """One step of a single walker at lattice position ``pos``."""
    k = int(round(pos / h))
    if k != 0:
        return (k + (1 if u >= 0.5 else -1)) * h
    return h if u >= zero_threshold(beta) else -h


def snap_even(x, h: float) -> np.ndarray:
    """Lattice index (in units of ``h``) of the nearest point of ``2h Z``."""
    return 2 * np.rint(np.asarray(x, dtype=float) / (2.0 * h)).astype(np.int64)


@nb.njit(cache=True)
def _lattice_step(k, u, thr):
    if k != 0:
        return k + 1 if u >= 0.5 else k - 1
    return 1 if u >= thr else -1


@nb.njit(cache=True)
def _run_flow(k0, uniforms, thr):
    m = k0.size
    n = uniforms.size
    out = np.empty((m, n + 1), dtype=np.int64)
    for i in range(m):
        out[i, 0] = k0[i]
    for t in range(n):
        u = uniforms[t]
        for i in range(m):
            out[i, t + 1] = _lattice_step(out[i, t], u, thr)
    return out


@dataclass
class WalkerPath:
    x0: float
    positions: np.ndarray
    lhat: np.ndarray
    zero_visits: np.ndarray


@dataclass
class FlowPaths:
    """All walkers of one flow run, sorted by starting point.

    ``k`` holds lattice indices (positions in units of ``h``), one row per
    walker, ``n_steps + 1`` columns.
    """

    noise: NoisePath
    beta: float
    k0: np.ndarray
    k: np.ndarray = field(repr=False)

    @property
    def h(self) -> float:
        return self.noise.h

    @property
    def n_walkers(self) -> int:
        return self.k.shape[0]

    @property
    def x0(self) -> np.ndarray:
        return self.k0 * self.h

    @property
    def positions(self) -> np.ndarray:
        return self.k * self.h

    @cached_property
    def lhat_units(self) -> np.ndarray:
        """``X - x0 - B`` in lattice units (an even integer); ``lhat = lhat_units * h / beta``."""
        return self.k - self.k0[:, None] - self.noise.walk[None, :]

    @property
    def lhat(self) -> np.ndarray:
        return self.lhat_units * (self.h / self.beta)

    @property
    def zero_visits(self) -> np.ndarray:
        z = np.zeros_like(self.k)
        np.cumsum(self.k[:, :-1] == 0, axis=1, out=z[:, 1:])
        return z

    def walker(self, i: int) -> WalkerPath:
        zv = np.zeros(self.k.shape[1], dtype=np.int64)
        np.cumsum(self.k[i, :-1] == 0, out=zv[1:])
        return WalkerPath(float(self.x0[i]), self.positions[i], self.lhat[i], zv)

    @property
    def walkers(self) -> list[WalkerPath]:
        return [self.walker(i) for i in range(self.n_walkers)]

    @cached_property
    def coalescence(self) -> np.ndarray:
        """Matrix of first equal step per pair; ``-1`` when not within the horizon."""
        m = self.n_walkers
        adj = np.full(max(m - 1, 0), -1, dtype=np.int64)
        for i in range(m - 1):
            eq = self.k[i] == self.k[i + 1]
            if eq.any():
                adj[i] = int(np.argmax(eq))
        mat = np.zeros((m, m), dtype=np.int64)
        for i in range(m):
            run = 0
            for j in range(i + 1, m):
                a = adj[j - 1]
                run = -1 if (run < 0 or a < 0) else max(run, a)
                mat[i, j] = mat[j, i] = run
        return mat


def simulate_flow(noise: NoisePath, beta: float, initial_points) -> FlowPaths:
    """Run every starting point through the shared noise."""
    beta = check_beta(beta)
    pts = np.asarray(initial_points, dtype=float).ravel()
    if pts.size == 0:
        raise ValueError("initial_points is empty")
    if not np.all(np.isfinite(pts)):
        raise ValueError("initial points must be finite")
    k0 = np.sort(snap_even(pts, noise.h))
    k = _run_flow(k0, np.asarray(noise.uniforms), zero_threshold(beta))
    return FlowPaths(noise, beta, k0, k)


def coalescence_step(flow: FlowPaths, i: int, j: int):
    """First step at which walkers ``i`` and ``j`` coincide, or ``None``."""
    m = flow.n_walkers
    if not (0 <= i < m and 0 <= j < m):
        raise IndexError(f"walker index out of range for {m} walkers")
    if i == j:
        return 0
    s = int(flow.coalescence[i, j])
    return None if s < 0 else s


def gap_structure(flow: FlowPaths, step: int):
    """Split the image of a uniform grid of starting points at ``step``.

    Returns ``(y1, y2, middle)``: the top of the lower rigid block, the bottom
    of the upper rigid block and the sorted distinct images strictly between.
    A block is rigid while consecutive image gaps equal the starting gaps; it
    must start at an edge walker that has not yet reached zero. When an edge
    walker has reached zero the continuum on that side lies outside the grid
    and ``y1 = -inf`` (or ``y2 = +inf``).
    """
    if not (0 <= step <= flow.noise.n_steps):
        raise IndexError("step outside the horizon")
    img = flow.k[:, step]
    if np.unique(img).size < 3:
        raise ValueError("fewer than 3 distinct image values")
    rigid = np.diff(img) == np.diff(flow.k0)
    m = img.size
    if rigid.all():
        below = np.nonzero(img <= 0)[0]
        a = int(below[-1]) if below.size else 0
        a = min(a, m - 2)
        return float(img[a] * flow.h), float(img[a + 1] * flow.h), []
    lh = flow.lhat_units[:, step]
    # a rigid run from an untouched edge walker is untouched throughout
    a = int(np.argmin(rigid))  # first non-rigid gap
    b = m - 1 - int(np.argmin(rigid[::-1]))
    y1 = img[a] * flow.h if lh[0] == 0 else -math.inf
    y2 = img[b] * flow.h if lh[-1] == 0 else math.inf
    pos = img * flow.h
    mid = np.unique(pos[(pos > y1) & (pos < y2)])
    return float(y1), float(y2), [float(v) for v in mid]


def _default_lags(width: int) -> np.ndarray:
    if width <= 2048:
        return np.arange(1, width)
    dy = 1 << np.arange(int(math.log2(width - 1)) + 1)
    extra = np.unique(np.rint(np.geomspace(1, width - 1, 64)).astype(np.int64))
    return np.unique(np.concatenate([dy, extra, [width - 1]]))


@nb.njit(cache=True)
def _max_abs_increment(xs, lags):
    out = np.zeros(lags.size, dtype=np.int64)
    n = xs.shape[1]
    for q in range(lags.size):
        r = lags[q]
        best = 0
        for i in range(xs.shape[0]):
            for t in range(n - r):
                d = abs(xs[i, t + r] - xs[i, t])
                if d > best:
                    best = d
        out[q] = best
    return out


def _modulus_terms(flow: FlowPaths, window, lags):
    a, b = int(window[0]), int(window[1])
    if not (0 <= a < b <= flow.noise.n_steps):
        raise ValueError("empty or out-of-range window")
    w = flow.noise.walk[a : b + 1]
    x = flow.k[:, a : b + 1]
    width = b - a + 1
    lags = _default_lags(width) if lags is None else np.asarray(lags, dtype=np.int64)
    lags = lags[(lags >= 1) & (lags < width)]
    xs = np.ascontiguousarray(np.unique(x, axis=0))  # coalesced walkers are identical rows
    dxs = _max_abs_increment(xs, np.ascontiguousarray(lags))
    out = []
    for r, dx in zip(lags, dxs):
        size = int(r) + 1
        delta = int(np.max(maximum_filter1d(w, size, mode="nearest") - minimum_filter1d(w, size, mode="nearest")))
        out.append((int(r), int(dx), delta))
    return out


def modulus_check(flow: FlowPaths, window, lags=None) -> float:
    """Worst ratio ``|X_u - X_v| / (2 delta(|u - v|))`` over walkers and step pairs.

    ``delta`` is the driving walk's modulus of continuity on ``window``. All
    lags are scanned for windows up to 2048 steps; longer windows use dyadic
    plus log-spaced lags unless ``lags`` is given.
    """
    terms = _modulus_terms(flow, window, lags)
    if not terms:
        return 0.0
    return max(dx / (2.0 * delta) for _, dx, delta in terms)


def modulus_excess(flow: FlowPaths, window, lags=None) -> float:
    """Largest ``|X_u - X_v| - 2 delta(|u - v|) - 2h`` (space units); ``<= 0`` means the bound holds."""
    terms = _modulus_terms(flow, window, lags)
    if not terms:
        return -math.inf
    return max(dx - 2 * delta - 2 for _, dx, delta in terms) * flow.h


def modulus_report(flow: FlowPaths, window, lags=None) -> tuple[float, float]:
    """``(modulus_check, modulus_excess)`` from a single scan."""
    terms = _modulus_terms(flow, window, lags)
    if not terms:
        return 0.0, -math.inf
    ratio = max(dx / (2.0 * delta) for _, dx, delta in terms)
    excess = max(dx - 2 * delta - 2 for _, dx, delta in terms) * flow.h
    return ratio, excess


def write_flow_csv(flow: FlowPaths, path, steps=None) -> Path:
    """Write ``walker_index, x0, step, position, lhat`` rows (all steps unless ``steps`` given)."""
    path = Path(path)
    steps = range(flow.noise.n_steps + 1) if steps is None else steps
    pos = flow.positions
    lh = flow.lhat
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["walker_index", "x0", "step", "position", "lhat"])
        for i in range(flow.n_walkers):
            for s in steps:
                wr.writerow([i, repr(float(flow.x0[i])), int(s), repr(float(pos[i, s])), repr(float(lh[i, s]))])
    return path


# --- pair runner with early stopping (same step rule, per-replica RNG) ---


@nb.njit(cache=True)
def _pair_core(klo, khi, thr, stop_gap, max_steps, seed, uniforms):
    """Run two walkers until they merge, their gap reaches ``stop_gap`` or the horizon.

    Draws from ``uniforms`` when it is non-empty, otherwise from numba's
    generator seeded with ``seed``. Returns (max_gap, status, steps, first_flag)
    with status 0 merged, 1 reached stop_gap, 2 horizon; first_flag is 0 when
    the lower walker was the first to sit at zero, 1 for the upper one, -1 if
    neither did.
    """
    if uniforms.size == 0:
        np.random.seed(seed)
    gmax = khi - klo
    first = -1
    if klo == 0:
        first = 0
    elif khi == 0:
        first = 1
    n = 0
    while True:
        g = khi - klo
        if g <= 0:
            return gmax, 0, n, first
        if g >= stop_gap:
            return gmax, 1, n, first
        if n >= max_steps:
            return gmax, 2, n, first
        u = uniforms[n] if uniforms.size > 0 else np.random.random()
        klo = _lattice_step(klo, u, thr)
        khi = _lattice_step(khi, u, thr)
        n += 1
        if first < 0:
            if klo == 0:
                first = 0
            elif khi == 0:
                first = 1
        g = khi - klo
        if g > gmax:
            gmax = g


def pair_max_gap_stepwise(x: float, y: float, beta: float, dt: float, uniforms=None, seed: int = 0,
                          stop_gap=None, max_steps: int = 10**6):
    """Step a single walker pair until merge, ``stop_gap`` or ``max_steps``.

    Returns ``(max_gap, status, steps, first_flag)`` with the gap in space
    units. Uses ``uniforms`` when given, else numba's generator seeded with
    ``seed``. Kept as a brute-force reference for :func:`run_embedded`.
    """
    beta = check_beta(beta)
    h = math.sqrt(dt)
    klo, khi = snap_even([x, y], h)
    if klo > khi:
        raise ValueError("need x <= y")
    sg = _BIG if stop_gap is None else int(math.ceil(stop_gap / h - 1e-9))
    u = np.empty(0) if uniforms is None else np.asarray(uniforms, dtype=np.float64)
    if u.size:
        max_steps = min(int(max_steps), u.size)
    g, st, n, f = _pair_core(int(klo), int(khi), zero_threshold(beta), sg, int(max_steps), int(seed), u)
    return g * h, int(st), int(n), int(f)


# --- embedded chain at zero-visit times ---
#
# Write Y_i = x0_i + beta * lhat_i (lattice units), so X_i = Y_i + B. Off zero
# nothing but B moves, hence between zero visits the only question is which
# level -Y the walk B reaches next: a gambler's-ruin draw between the two
# clusters bracketing -B. At a zero visit one uniform moves B and the cluster
# at zero exactly as in the stepwise rule. The law of every Y (and of every
# pair gap) is the same as under step-by-step simulation; real time is not
# tracked.

_BIG = np.iinfo(np.int64).max
NO_LEVEL = np.iinfo(np.int64).min


@nb.njit(cache=True)
def _embedded_core(y0, thr, seed, max_events, stop_gap, gmax, level, flag):
    np.random.seed(seed)
    m = y0.size
    vals = np.empty(m, dtype=np.int64)
    first = np.empty(m, dtype=np.int64)
    nc = 0
    for i in range(m):
        if nc > 0 and vals[nc - 1] == y0[i]:
            level[i - 1] = y0[i]
            gmax[i - 1] = 0
            continue
        vals[nc] = y0[i]
        first[nc] = i
        nc += 1
    for i in range(m - 1):
        if level[i] == NO_LEVEL:
            gmax[i] = y0[i + 1] - y0[i]
    b = 0
    events = 0
    while nc > 1:
        if events >= max_events:
            return events, 2
        # travel to the next zero visit
        c = np.searchsorted(vals[:nc], -b)
        if c < nc and vals[c] == -b:
            pass
        elif c == 0:
            b = -vals[0]
        elif c == nc:
            b = -vals[nc - 1]
            c = nc - 1
        else:
            up = -vals[c - 1] - b
            down = b + vals[c]
            if np.random.random() < down / (up + down):
                b = -vals[c - 1]
                c = c - 1
            else:
                b = -vals[c]
        events += 1
        # pairs at the cluster boundaries get their first zero visit
        if c > 0:
            p = first[c] - 1
            if flag[p] < 0:
                flag[p] = 1
        if c < nc - 1:
            p = first[c + 1] - 1
            if flag[p] < 0:
                flag[p] = 0
        u = np.random.random()
        xi = 1 if u >= 0.5 else -1
        d = 1 if u >= thr else -1
        kick = d - xi
        b += xi
        if kick != 0:
            vals[c] += kick
            stop = False
            if c < nc - 1:
                p = first[c + 1] - 1
                g = vals[c + 1] - vals[c]
                if g > gmax[p]:
                    gmax[p] = g
                if g >= stop_gap:
                    stop = True
                if g == 0:
                    level[p] = vals[c]
                    for q in range(c + 1, nc - 1):
                        vals[q] = vals[q + 1]
                        first[q] = first[q + 1]
                    nc -= 1
            if c > 0:
                p = first[c] - 1
                g = vals[c] - vals[c - 1]
                if g > gmax[p]:
                    gmax[p] = g
                if g >= stop_gap:
                    stop = True
                if g == 0:
                    level[p] = vals[c]
                    for q in range(c, nc - 1):
                        vals[q] = vals[q + 1]
                        first[q] = first[q + 1]
                    nc -= 1
            if stop:
                return events, 1
    return events, 0


@nb.njit(cache=True)
def _embedded_batch(y0, thr, seeds, max_events, stop_gap):
    n = seeds.size
    m = y0.size
    gmax = np.zeros((n, m - 1), dtype=np.int64)
    level = np.full((n, m - 1), NO_LEVEL, dtype=np.int64)
    flag = np.full((n, m - 1), -1, dtype=np.int64)
    events = np.empty(n, dtype=np.int64)
    status = np.empty(n, dtype=np.int64)
    for r in range(n):
        events[r], status[r] = _embedded_core(y0, thr, seeds[r], max_events, stop_gap, gmax[r], level[r], flag[r])
    return gmax, level, flag, events, status


@dataclass
class EmbeddedRun:
    """Adjacent-pair statistics of embedded-chain flow runs, one row per seed.

    ``max_gap`` and ``level`` are in space units; ``level`` is NaN for pairs
    that did not merge. ``flag`` is 0 when the lower walker of the pair was the
    first of the two to sit at zero, 1 for the upper walker, -1 if neither
    did. ``status`` is 0 all merged, 1 stopped at ``stop_gap``, 2 event cap.
    """

    x0: np.ndarray
    max_gap: np.ndarray
    level: np.ndarray
    flag: np.ndarray
    events: np.ndarray
    status: np.ndarray


def run_embedded(initial_points, beta: float, h: float, seeds, max_events: int = 10**8, stop_gap=None) -> EmbeddedRun:
    """Run the flow of ``initial_points`` at zero-visit times for each seed.

    Starting points are snapped to ``2h Z`` and sorted. With ``stop_gap`` a
    run halts as soon as some adjacent gap reaches it.
    """
    beta = check_beta(beta)
    pts = np.asarray(initial_points, dtype=float).ravel()
    if pts.size < 2:
        raise ValueError("need at least two starting points")
    y0 = np.sort(snap_even(pts, h))
    sg = _BIG if stop_gap is None else int(math.ceil(stop_gap / h - 1e-9))
    seeds = np.atleast_1d(np.asarray(seeds, dtype=np.int64))
    g, lv, fl, ev, st = _embedded_batch(y0, zero_threshold(beta), seeds, int(max_events), sg)
    level = np.where(lv == NO_LEVEL, np.nan, lv * h)
    return EmbeddedRun(y0 * h, g * h, level, fl, ev, st)
