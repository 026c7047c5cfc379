"""Exact sampler and closed forms for the lens distance process (Z, J).

``Z`` is piecewise linear on the local-time clock with slope ``+beta`` while
``J = 1`` and ``-beta`` while ``J = 0``. Between flag flips nothing random
happens, so a path is generated by sampling the level at which the flag flips
next. For the plain process and its ``h``-transform the integrated hazard is a
power of ``z`` and is inverted in closed form; for the ``h_minus`` transform
(conditioned never to reach a ceiling ``b``) the integrated hazard is a sum of
logarithms and is inverted by bisection.

Negative ``beta`` is mapped to ``|beta|`` with the flag relabelled
``j -> 1 - j``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .flow import check_beta
from .seeding import philox
from .stats import Estimate, normal_interval, wilson_interval

__all__ = [
    "ZJState",
    "ZJPath",
    "TransformKind",
    "PLAIN",
    "H_UP",
    "h_minus",
    "Stop",
    "FLOOR",
    "CEILING",
    "HORIZON",
    "jump_level",
    "next_levels",
    "open_uniform",
    "simulate_zj",
    "run_batch",
    "BatchResult",
    "closed_hitting",
    "closed_potential",
    "potential_bin_average",
    "estimate_potential",
    "harmonic_h",
    "return_probability",
    "estimate_return_probability",
    "conditioned_max_path",
    "ascent_paths",
    "descent_paths",
    "reverse_path",
    "duality_measure_m",
    "duality_bin_average",
    "estimate_ascent_occupation",
    "write_zj_csv",
]

FLOOR = "absorbed-at-floor"
CEILING = "hit-ceiling"
HORIZON = "horizon"

_BISECT_RTOL = 1e-12


@dataclass(frozen=True)
class ZJState:
    z: float
    j: int

    def __post_init__(self):
        if not self.z >= 0:
            raise ValueError("z must be nonnegative")
        if self.j not in (0, 1):
            raise ValueError("flag must be 0 or 1")


@dataclass(frozen=True)
class TransformKind:
    tag: str
    b: Optional[float] = None

    def __post_init__(self):
        if self.tag not in ("plain", "h_up", "h_minus"):
            raise ValueError(f"unknown transform {self.tag!r}")
        if self.tag == "h_minus" and not (self.b is not None and self.b > 0):
            raise ValueError("h_minus needs a ceiling b > 0")


PLAIN = TransformKind("plain")
H_UP = TransformKind("h_up")


def h_minus(b: float) -> TransformKind:
    return TransformKind("h_minus", float(b))


@dataclass(frozen=True)
class Stop:
    """Stopping rule: any of ceiling level, floor level, local-time horizon."""

    ceiling: Optional[float] = None
    floor: Optional[float] = None
    max_time: Optional[float] = None

    def __post_init__(self):
        for name in ("ceiling", "floor", "max_time"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"stop parameter {name} must be positive")
        if self.ceiling is None and self.floor is None and self.max_time is None:
            raise ValueError("at least one stop condition is required")


@dataclass
class ZJPath:
    """Breakpoints ``(t, z, j)`` of one path on the local-time clock.

    ``j[i]`` is the flag on the segment that starts at breakpoint ``i``; the
    final breakpoint repeats the flag of the last segment, so flags alternate
    between consecutive breakpoints except at the terminal one.
    """

    t: np.ndarray
    z: np.ndarray
    j: np.ndarray
    terminal: str
    beta: float
    time_reversed: bool = False
    floor: Optional[float] = None

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    @property
    def n_segments(self) -> int:
        return self.t.size - 1

    @property
    def max_z(self) -> float:
        return float(self.z.max())

    @property
    def tail_bound(self) -> float:
        """Local time left after floor absorption is at most ``floor / beta`` per remaining descent."""
        return 0.0 if self.floor is None else self.floor / self.beta

    def breakpoints(self) -> list[tuple[float, float, int]]:
        return [(float(a), float(b), int(c)) for a, b, c in zip(self.t, self.z, self.j)]

    def slopes(self) -> np.ndarray:
        return np.sign(np.diff(self.z))

    def __eq__(self, other):
        if not isinstance(other, ZJPath):
            return NotImplemented
        return (
            self.terminal == other.terminal
            and self.time_reversed == other.time_reversed
            and np.array_equal(self.j, other.j)
            and np.allclose(self.t, other.t, rtol=0, atol=1e-12 * max(1.0, abs(self.t[-1])))
            and np.array_equal(self.z, other.z)
        )


def _sign_map(beta: float, j):
    beta = check_beta(beta)
    if beta < 0:
        return -beta, 1 - np.asarray(j)
    return beta, np.asarray(j)


def open_uniform(rng: np.random.Generator, size) -> np.ndarray:
    """Uniforms strictly inside (0, 1)."""
    return (rng.integers(0, 1 << 53, size=size, dtype=np.int64).astype(np.float64) + 0.5) / float(1 << 53)


# --- flip levels ---


def _hminus_up_logsurv(z, w, b, beta):
    # increasing from z to w < b: S = (z/w)^((1+beta)/(2 beta)) * (b - w)/(b - z)
    q = (1 + beta) / (2 * beta)
    return q * (np.log(z) - np.log(w)) + np.log(b - w) - np.log(b - z)


def _hminus_down_logsurv(z, w, b, beta):
    # decreasing from z to w: S = (w/z)^((1-beta)/(2 beta)) * (c - w)/(c - z), c = b(1+beta)/(1-beta)
    p = (1 - beta) / (2 * beta)
    c = b * (1 + beta) / (1 - beta)
    return p * (np.log(w) - np.log(z)) + np.log(c - w) - np.log(c - z)


def _bisect(f, lo, hi, target):
    """Vectorised bisection on a log-level ``x`` for decreasing ``f`` with f(lo) >= target >= f(hi).

    An absolute tolerance on ``x = log w`` is a relative tolerance on ``w``.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        above = f(mid) > target
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
        if np.all(hi - lo <= _BISECT_RTOL):
            break
    return 0.5 * (lo + hi)


def next_levels(z, j, beta: float, kind: TransformKind, u):
    """Vectorised flip levels for states ``(z, j)`` with uniforms ``u`` (``beta > 0``)."""
    z = np.asarray(z, dtype=float)
    j = np.asarray(j)
    u = np.asarray(u, dtype=float)
    up = j == 1
    if kind.tag == "plain":
        e_up, e_dn = (1 + beta), (1 - beta)
    elif kind.tag == "h_up":
        e_up, e_dn = (1 - beta), (1 + beta)
    else:
        return _hminus_levels(z, up, beta, kind.b, u)
    return np.where(up, z * u ** (-2 * beta / e_up), z * u ** (2 * beta / e_dn))


def _hminus_levels(z, up, beta, b, u):
    out = np.empty_like(z)
    lu = np.log(u)
    if np.any(up):
        zu, lt = z[up], lu[up]
        # root lies in [z, min(b, plain root)]; bisect on log w
        hi = np.minimum(zu * np.exp(-lt * 2 * beta / (1 + beta)), b)
        g = lambda lw: _hminus_up_logsurv(zu, np.exp(lw), b, beta)
        w = np.exp(_bisect(g, np.log(zu), np.log(hi), lt))
        out[up] = np.minimum(w, np.nextafter(b, 0.0))
    dn = ~up
    if np.any(dn):
        zd, lt = z[dn], lu[dn]
        p = (1 - beta) / (2 * beta)
        c = b * (1 + beta) / (1 - beta)
        # root in log space between the two power-law bounds
        lo_l = np.log(zd) + (lt + np.log((c - zd) / c)) / p
        hi_l = np.log(zd) + lt / p
        g = lambda lw: -_hminus_down_logsurv(zd, np.exp(lw), b, beta)
        lw = _bisect(g, lo_l, hi_l, -lt)
        out[dn] = np.exp(lw)
    return out


def jump_level(state: ZJState, beta: float, kind: TransformKind, u: float) -> float:
    """Level at which the flag of ``state`` flips, for a uniform ``u`` in (0, 1)."""
    if not (0.0 < u < 1.0):
        raise ValueError("u must lie in (0, 1)")
    if state.z <= 0:
        raise ValueError("state is absorbed at z = 0")
    beta, j = _sign_map(beta, state.j)
    if kind.tag == "h_minus" and state.z >= kind.b:
        raise ValueError("h_minus needs z < b")
    return float(next_levels(np.array([state.z]), np.array([int(j)]), beta, kind, np.array([u]))[0])


# --- batch engine ---


@dataclass
class BatchResult:
    terminal: np.ndarray  # 0 floor, 1 ceiling, 2 horizon
    z_end: np.ndarray
    j_end: np.ndarray
    max_z: np.ndarray
    time: np.ndarray
    n_flips: np.ndarray
    paths: Optional[list] = field(default=None, repr=False)


def run_batch(
    z0,
    j0,
    beta: float,
    kind: TransformKind,
    stop: Stop,
    n: int,
    rng: np.random.Generator,
    on_segment: Optional[Callable] = None,
    record: bool = False,
    max_rounds: int = 100_000,
) -> BatchResult:
    """Simulate ``n`` independent paths segment by segment.

    ``on_segment(idx, z_from, z_to, j)`` is called once per round with the
    replica indices and the segment end points; use it to accumulate
    occupation statistics. ``beta`` must be positive here.
    """
    if beta <= 0:
        raise ValueError("run_batch expects beta > 0 (relabel flags for negative beta)")
    z = np.broadcast_to(np.asarray(z0, dtype=float), (n,)).copy()
    j = np.broadcast_to(np.asarray(j0, dtype=np.int64), (n,)).copy()
    if np.any(z <= 0):
        raise ValueError("starting level must be positive")
    t = np.zeros(n)
    zmax = z.copy()
    flips = np.zeros(n, dtype=np.int64)
    term = np.full(n, -1, dtype=np.int64)
    ceil = math.inf if stop.ceiling is None else stop.ceiling
    flo = 0.0 if stop.floor is None else stop.floor
    tmax = math.inf if stop.max_time is None else stop.max_time
    rec = [[(0.0, float(z[i]), int(j[i]))] for i in range(n)] if record else None
    # already outside the band
    term[(z >= ceil)] = 1
    term[(term < 0) & (z <= flo)] = 0
    active = np.nonzero(term < 0)[0]
    rounds = 0
    while active.size:
        rounds += 1
        if rounds > max_rounds:
            raise RuntimeError("path did not terminate; add a floor or horizon")
        za, ja = z[active], j[active]
        u = open_uniform(rng, active.size)
        w = next_levels(za, ja, beta, kind, u)
        up = ja == 1
        tcode = np.full(active.size, -1)
        hit_c = up & (w >= ceil)
        hit_f = (~up) & (w <= flo)
        w = np.where(hit_c, ceil, np.where(hit_f, flo, w))
        tcode[hit_c] = 1
        tcode[hit_f] = 0
        dt = np.abs(w - za) / beta
        over = t[active] + dt > tmax
        if np.any(over):
            rem = tmax - t[active][over]
            w[over] = za[over] + np.where(up[over], 1.0, -1.0) * beta * rem
            dt[over] = rem
            tcode[over] = 2
        if on_segment is not None:
            on_segment(active, za, w, ja)
        t[active] += dt
        z[active] = w
        zmax[active] = np.maximum(zmax[active], w)
        done = tcode >= 0
        flipped = ~done
        j[active[flipped]] = 1 - ja[flipped]
        flips[active[flipped]] += 1
        term[active[done]] = tcode[done]
        if record:
            for k, i in enumerate(active):
                rec[i].append((float(t[i]), float(w[k]), int(j[i])))
        active = active[flipped]
    paths = None
    if record:
        names = {0: FLOOR, 1: CEILING, 2: HORIZON}
        paths = []
        for i in range(n):
            arr = np.array(rec[i])
            paths.append(
                ZJPath(arr[:, 0], arr[:, 1], arr[:, 2].astype(np.int64), names[int(term[i])], beta,
                       floor=stop.floor)
            )
    return BatchResult(term, z, j, zmax, t, flips, paths)


def simulate_zj(z0: float, j0: int, beta: float, kind: TransformKind, stop: Stop, seed: int) -> ZJPath:
    """One exact path from ``(z0, j0)`` until the first stop condition."""
    if not z0 > 0:
        raise ValueError("z0 must be positive")
    b, jj = _sign_map(beta, j0)
    if kind.tag == "h_minus" and z0 >= kind.b:
        raise ValueError("h_minus needs z0 < b")
    if kind.tag in ("plain", "h_minus") and stop.floor is None and stop.max_time is None:
        raise ValueError("plain and h_minus paths need a floor or a horizon")
    res = run_batch(z0, int(jj), b, kind, stop, 1, philox(int(seed)), record=True)
    path = res.paths[0]
    if beta < 0:
        path.j = 1 - path.j
        path.beta = beta
    return path


# --- closed forms ---


def closed_hitting(z: float, j: int, v: float, beta: float) -> float:
    """Probability that Z started at ``(z, j)`` ever reaches level ``v``."""
    if not (z > 0 and v > 0):
        raise ValueError("z and v must be positive")
    beta, j = _sign_map(beta, j)
    if v <= z:
        return 1.0
    return (z / v) * ((1 - beta) / (1 + beta) if j == 0 else 1.0)


_POT_COEF = {  # (j, k): (coef for z <= x, coef for z > x) in units of 1/(2 beta^2)
    (0, 0): ("+", "-"),
    (0, 1): ("-", "-"),
    (1, 0): ("+", "+"),
    (1, 1): ("-", "+"),
}


def _pot_coefs(j, k, beta):
    lo, hi = _POT_COEF[(int(j), int(k))]
    c = lambda s: (1 + beta if s == "+" else 1 - beta) / (2 * beta * beta)
    return c(lo), c(hi)


def closed_potential(x: float, j: int, z: float, k: int, beta: float) -> float:
    """Potential density u((x, j), (z, k)) of (Z, J)."""
    if not (x > 0 and z > 0):
        raise ValueError("x and z must be positive")
    beta, jk = _sign_map(beta, [j, k])
    c_lo, c_hi = _pot_coefs(jk[0], jk[1], beta)
    return c_lo if z <= x else c_hi * x / z


def potential_bin_average(x: float, j: int, k: int, beta: float, lo: float, hi: float) -> float:
    """Average of ``closed_potential`` over ``[lo, hi]`` (exact integral / width)."""
    if not (0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    beta, jk = _sign_map(beta, [j, k])
    c_lo, c_hi = _pot_coefs(jk[0], jk[1], beta)
    total = 0.0
    a, b = lo, min(hi, x)
    if b > a:
        total += c_lo * (b - a)
    a, b = max(lo, x), hi
    if b > a:
        total += c_hi * x * math.log(b / a)
    return total / (hi - lo)


def harmonic_h(z: float, j: int, beta: float) -> float:
    if z < 0:
        raise ValueError("z must be nonnegative")
    beta, j = _sign_map(beta, j)
    return float(z if j == 1 else z * (1 - beta) / (1 + beta))


def return_probability(beta: float) -> float:
    """Probability that (Z, J) comes back to its starting state ``(x, 0)``."""
    beta = check_beta(beta)
    if beta <= 0:
        raise ValueError("return probability is stated for beta > 0")
    return (1 - beta) / (1 + beta)


def duality_measure_m(z: float, j: int, b: float, beta: float) -> float:
    """Density of the duality measure m(dz, j) on (0, b).

    The flag follows the reversed-process convention, where ``j = 1`` marks
    decreasing segments.
    """
    beta = check_beta(beta)
    if not (0 < z < b):
        raise ValueError("z must lie in (0, b)")
    c = 1.0 / (2 * beta * beta)
    if j == 1:
        return (1 - beta) * c * (1 - z / b)
    if j == 0:
        return (1 + beta) * c - (1 - beta) * c * z / b
    raise ValueError("flag must be 0 or 1")


def duality_bin_average(j: int, b: float, beta: float, lo: float, hi: float) -> float:
    # m is linear in z, so the bin average is its value at the bin centre
    return duality_measure_m(0.5 * (lo + hi), j, b, beta)


# --- estimators ---


def _occupation_accumulator(edges: np.ndarray, beta: float, n: int):
    occ = np.zeros((n, 2, edges.size - 1))
    lo_e, hi_e = edges[:-1], edges[1:]

    def on_segment(idx, za, w, ja):
        a = np.minimum(za, w)[:, None]
        b = np.maximum(za, w)[:, None]
        ov = np.clip(np.minimum(b, hi_e) - np.maximum(a, lo_e), 0.0, None) / beta
        for k in (0, 1):
            sel = ja == k
            if np.any(sel):
                np.add.at(occ[:, k, :], idx[sel], ov[sel])

    return occ, on_segment


def _block_rngs(seed: int, n: int, block: int):
    nblocks = (n + block - 1) // block
    for bi in range(nblocks):
        size = min(block, n - bi * block)
        yield size, philox(int(seed), bi)


BLOCK = 1 << 14


def estimate_potential(x: float, j: int, beta: float, edges, replicas: int, seed: int, eps: Optional[float] = None,
                       z: float = 1.96):
    """Binned occupation density of (Z, J) from ``(x, j)``.

    Returns ``(mean, ci_lo, ci_hi)`` arrays of shape ``(2, n_bins)`` indexed by
    ``[k, bin]``: local time spent in each bin with flag ``k``, divided by the
    bin width, averaged over replicas with a normal interval.
    """
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    beta = check_beta(beta)
    if beta < 0:
        raise ValueError("estimate_potential expects beta > 0")
    edges = np.asarray(edges, dtype=float)
    if edges[0] <= 0 or np.any(np.diff(edges) <= 0):
        raise ValueError("bin edges must be positive and increasing")
    eps = edges[0] * 1e-3 if eps is None else eps
    if not eps < edges[0]:
        raise ValueError("floor must lie below the lowest bin")
    width = np.diff(edges)
    s1 = np.zeros((2, width.size))
    s2 = np.zeros((2, width.size))
    for size, rng in _block_rngs(seed, replicas, BLOCK):
        occ, cb = _occupation_accumulator(edges, beta, size)
        run_batch(x, j, beta, PLAIN, Stop(floor=eps), size, rng, on_segment=cb)
        dens = occ / width
        s1 += dens.sum(axis=0)
        s2 += (dens * dens).sum(axis=0)
    mean = s1 / replicas
    var = np.maximum(s2 / replicas - mean * mean, 0.0) * replicas / max(replicas - 1, 1)
    se = np.sqrt(var / replicas)
    return mean, mean - z * se, mean + z * se


def estimate_return_probability(beta: float, replicas: int, seed: int, x: float = 1.0, eps: float = 1e-8) -> Estimate:
    """Fraction of paths from ``(x, 0)`` that pass level ``x`` downwards again."""
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    beta = check_beta(beta)
    returned = np.zeros(replicas, dtype=bool)
    off = 0
    for size, rng in _block_rngs(seed, replicas, BLOCK):
        hit = np.zeros(size, dtype=bool)

        def cb(idx, za, w, ja):
            back = (ja == 0) & (za > x) & (w < x)
            hit[idx[back]] = True

        run_batch(x, 0, beta, PLAIN, Stop(floor=eps * x), size, rng, on_segment=cb)
        returned[off : off + size] = hit
        off += size
    return wilson_interval(int(returned.sum()), replicas)


def ascent_paths(b: float, beta: float, n: int, seed: int, eps_entrance: Optional[float] = None) -> list:
    """``n`` h-transformed ascents from ``eps_entrance`` killed on reaching ``b``."""
    eps_entrance = 1e-6 * b if eps_entrance is None else eps_entrance
    if not (0 < eps_entrance < b):
        raise ValueError("eps_entrance must lie in (0, b)")
    out = []
    for size, rng in _block_rngs(seed, n, BLOCK):
        out += run_batch(eps_entrance, 1, beta, H_UP, Stop(ceiling=b), size, rng, record=True).paths
    return out


def descent_paths(b: float, beta: float, n: int, seed: int, eps_floor: Optional[float] = None) -> list:
    """``n`` paths from ``(b, 0)`` conditioned never to return to ``b``, run down to ``eps_floor``."""
    eps_floor = 1e-6 * b if eps_floor is None else eps_floor
    if not (0 < eps_floor < b):
        raise ValueError("eps_floor must lie in (0, b)")
    out = []
    for size, rng in _block_rngs(seed, n, BLOCK):
        out += run_batch(b, 0, beta, h_minus(b), Stop(floor=eps_floor), size, rng, record=True).paths
    return out


def _join(asc: ZJPath, desc: ZJPath) -> ZJPath:
    t0 = asc.t[-1]
    t = np.concatenate([asc.t[:-1], desc.t + t0])
    z = np.concatenate([asc.z[:-1], desc.z])
    j = np.concatenate([asc.j[:-1], desc.j])
    return ZJPath(t, z, j, desc.terminal, asc.beta, floor=desc.floor)


def conditioned_max_path(b: float, beta: float, eps_entrance: Optional[float], eps_floor: Optional[float], seed: int,
                         n: Optional[int] = None):
    """Path(s) of Z conditioned on ``sup Z = b``: h-ascent to ``b`` joined to an h_minus descent.

    Returns one :class:`ZJPath` when ``n`` is None, else a list of ``n``.
    """
    beta = check_beta(beta)
    if beta < 0:
        raise ValueError("conditioned_max_path expects beta > 0")
    eps_entrance = 1e-6 * b if eps_entrance is None else eps_entrance
    eps_floor = 1e-6 * b if eps_floor is None else eps_floor
    for e in (eps_entrance, eps_floor):
        if not (0 < e < b):
            raise ValueError("eps parameters must lie in (0, b)")
    m = 1 if n is None else int(n)
    asc = ascent_paths(b, beta, m, int(seed) * 2 + 0, eps_entrance)
    desc = descent_paths(b, beta, m, int(seed) * 2 + 1, eps_floor)
    paths = [_join(a, d) for a, d in zip(asc, desc)]
    return paths[0] if n is None else paths


def reverse_path(p: ZJPath) -> ZJPath:
    """Time reversal ``t -> duration - t``; segment flags travel with their segments."""
    if p.terminal != FLOOR:
        raise ValueError("only paths absorbed at the floor can be reversed")
    ell = p.t[-1]
    t = (ell - p.t[::-1]) + p.t[0]
    z = p.z[::-1].copy()
    seg = p.j[:-1][::-1]
    j = np.concatenate([seg, seg[-1:]])
    return ZJPath(t, z, j, p.terminal, p.beta, not p.time_reversed, floor=p.floor)


def estimate_ascent_occupation(b: float, beta: float, edges, replicas: int, seed: int,
                               eps_entrance: Optional[float] = None, z: float = 1.96):
    """Binned occupation density of the h-ascent from the entrance, killed at ``b``.

    Returned arrays have shape ``(2, n_bins)`` and are indexed by the
    reversed-process flag (``1`` = decreasing segments), matching
    :func:`duality_measure_m`.
    """
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    beta = check_beta(beta)
    eps_entrance = 1e-6 * b if eps_entrance is None else eps_entrance
    edges = np.asarray(edges, dtype=float)
    width = np.diff(edges)
    s1 = np.zeros((2, width.size))
    s2 = np.zeros((2, width.size))
    for size, rng in _block_rngs(seed, replicas, BLOCK):
        occ, cb = _occupation_accumulator(edges, beta, size)
        run_batch(eps_entrance, 1, beta, H_UP, Stop(ceiling=b), size, rng, on_segment=cb)
        dens = occ[:, ::-1, :] / width  # slope flag -> reversed-process flag
        s1 += dens.sum(axis=0)
        s2 += (dens * dens).sum(axis=0)
    mean = s1 / replicas
    var = np.maximum(s2 / replicas - mean * mean, 0.0) * replicas / max(replicas - 1, 1)
    se = np.sqrt(var / replicas)
    return mean, mean - z * se, mean + z * se


def write_zj_csv(path_obj: ZJPath, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["t", "z", "j"])
        for a, b, c in zip(path_obj.t, path_obj.z, path_obj.j):
            wr.writerow([repr(float(a)), repr(float(b)), int(c)])
    return path
