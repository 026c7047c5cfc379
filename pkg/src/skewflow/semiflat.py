"""Excursion race and stage survival for skew random walks with beta < 0.

Both experiments follow a single walker started at 0 and only care about what
happens at its zero visits and about how far each excursion reaches. In
lattice units write ``X = Y + B`` with ``Y = beta * lhat / h``; ``Y`` moves
only at zero visits. Between zero visits the walker is a simple random walk,
so whether an excursion reaches a given level before returning is a
gambler's-ruin draw. The fast kernels use that; the stepwise kernels walk
every step and serve as a reference.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numba as nb
import numpy as np

from .flow import check_beta, zero_threshold
from .seeding import derive_seeds
from .stats import Estimate, wilson_interval

__all__ = [
    "SemiflatParams",
    "alpha",
    "race_target",
    "stage_target",
    "race_probability",
    "stage_survival",
    "Refinement",
    "refine",
    "two_stage_check",
    "write_refinement_csv",
]


@dataclass(frozen=True)
class SemiflatParams:
    beta: float
    K: float = 10.0
    epsilon: float = 0.5

    def __post_init__(self):
        b = check_beta(self.beta)
        if b >= 0:
            raise ValueError("semi-flat experiments need beta < 0")
        if not self.K > 0:
            raise ValueError("K must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


def _neg_beta(beta: float) -> float:
    beta = check_beta(beta)
    if beta >= 0:
        raise ValueError("beta must be negative")
    return beta


def alpha(beta: float, K: float) -> float:
    beta = _neg_beta(beta)
    if not K > 0:
        raise ValueError("K must be positive")
    return (beta - 1) / (2 * beta) - (1 + beta) / (2 * K * beta)


def stage_target(beta: float, K: float, stages: int = 1) -> float:
    return 2.0 ** (-stages * alpha(beta, K))


def race_target(beta: float, epsilon: float) -> float:
    beta = _neg_beta(beta)
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return (1 - beta / epsilon) ** ((1 - beta) / (2 * beta))


# --- kernels (lattice units, h = 1) ---


@nb.njit(cache=True)
def _race_embedded(thr, target, wall, seed, max_visits):
    """1 if |Y| reaches ``target`` before B reaches ``-wall``; 0 otherwise; -1 at the cap."""
    np.random.seed(seed)
    y = 0
    for _ in range(max_visits):
        # at zero: B = -Y = |Y|
        u = np.random.random()
        xi = 1 if u >= 0.5 else -1
        d = 1 if u >= thr else -1
        b = -y + xi
        y += d - xi
        if -y >= target:
            return 1
        if b <= -wall:
            return 0
        if d == -1:
            # X = -1: back up to 0 (distance 1) or B down to -wall (distance b + wall)
            dist = b + wall
            if np.random.random() * (1 + dist) < 1.0:
                return 0
    return -1


@nb.njit(cache=True)
def _race_stepwise(thr, target, wall, seed, max_steps):
    np.random.seed(seed)
    x = 0
    b = 0
    y = 0
    for _ in range(max_steps):
        u = np.random.random()
        xi = 1 if u >= 0.5 else -1
        if x == 0:
            d = 1 if u >= thr else -1
            y += d - xi
            x = d
        else:
            x += xi
        b += xi
        if -y >= target:
            return 1
        if b <= -wall:
            return 0
    return -1


@nb.njit(cache=True)
def _stage_embedded(thr, K, y0, stages, seed, max_visits):
    """1 if |Y| grows from ``y0`` to ``2^stages * y0`` with no disqualifying excursion."""
    np.random.seed(seed)
    y = -y0
    target = y0 * 2**stages
    for _ in range(max_visits):
        u = np.random.random()
        xi = 1 if u >= 0.5 else -1
        d = 1 if u >= thr else -1
        y += d - xi
        ay = -y
        if ay >= target:
            return 1
        if d == 1:
            top = math.ceil(K * ay - 1e-9)  # fail once X >= K |Y|
            if top <= 1:
                return 0
            if np.random.random() * top < 1.0:
                return 0
        else:
            if ay <= 1:  # fail once X <= -|Y|
                return 0
            if np.random.random() * ay < 1.0:
                return 0
    return -1


@nb.njit(cache=True)
def _stage_stepwise(thr, K, y0, stages, seed, max_steps):
    np.random.seed(seed)
    y = -y0
    x = 0
    target = y0 * 2**stages
    top = 0
    for _ in range(max_steps):
        u = np.random.random()
        xi = 1 if u >= 0.5 else -1
        if x == 0:
            d = 1 if u >= thr else -1
            y += d - xi
            x = d
            if -y >= target:
                return 1
            top = math.ceil(K * (-y) - 1e-9)
        else:
            x += xi
        if x > 0 and x >= top:
            return 0
        if x < 0 and x <= y:
            return 0
    return -1


@nb.njit(cache=True)
def _race_batch(thr, target, wall, seeds, cap, stepwise):
    out = np.empty(seeds.size, dtype=np.int64)
    for i in range(seeds.size):
        if stepwise:
            out[i] = _race_stepwise(thr, target, wall, seeds[i], cap)
        else:
            out[i] = _race_embedded(thr, target, wall, seeds[i], cap)
    return out


@nb.njit(cache=True)
def _stage_batch(thr, K, y0, stages, seeds, cap, stepwise):
    out = np.empty(seeds.size, dtype=np.int64)
    for i in range(seeds.size):
        if stepwise:
            out[i] = _stage_stepwise(thr, K, y0, stages, seeds[i], cap)
        else:
            out[i] = _stage_embedded(thr, K, y0, stages, seeds[i], cap)
    return out


def _result(codes: np.ndarray, stepwise: bool) -> Estimate:
    # the stepwise walk has heavy-tailed excursion lengths; capped runs are dropped there
    capped = int(np.sum(codes < 0))
    if capped and not stepwise:
        raise RuntimeError(f"{capped} replicas hit the visit cap")
    done = codes[codes >= 0]
    if done.size == 0:
        raise RuntimeError("every replica hit the step cap")
    return wilson_interval(int(np.sum(done == 1)), done.size)


def race_probability(beta: float, epsilon: float, h: float, replicas: int, seed: int,
                     stepwise: bool = False, cap: int = 10**8) -> Estimate:
    """P(discrete local time of the walker from 0 reaches 1 before the driving walk hits ``-epsilon``).

    With ``stepwise=True`` every lattice step is simulated and replicas still
    running after ``cap`` steps are left out of the estimate.
    """
    beta = _neg_beta(beta)
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    if not (epsilon > 0 and h > 0):
        raise ValueError("epsilon and h must be positive")
    target = int(math.ceil(-beta / h - 1e-9))  # lhat >= 1  <=>  |Y| >= |beta| / h
    wall = int(math.ceil(epsilon / h - 1e-9))
    seeds = derive_seeds(seed, "race", replicas)
    return _result(_race_batch(zero_threshold(beta), target, wall, seeds, cap, stepwise), stepwise)


def stage_survival(beta: float, K: float, stage_scale: float, h: float, replicas: int, seed: int,
                   stages: int = 1, stepwise: bool = False, cap: int = 10**8) -> Estimate:
    """P(local time grows from ``stage_scale`` to ``2^stages * stage_scale`` with no bad excursion).

    An excursion is bad if it rises to ``-K beta lhat`` or falls to
    ``beta lhat``, with ``lhat`` read at the excursion's start.
    """
    beta = _neg_beta(beta)
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    if not (K > 0 and stage_scale > 0 and h > 0):
        raise ValueError("K, stage_scale and h must be positive")
    if stages < 1:
        raise ValueError("stages must be >= 1")
    y0 = 2 * int(round(-beta * stage_scale / (2 * h)))
    if y0 < 2:
        raise ValueError("mesh too coarse for the stage scale")
    seeds = derive_seeds(seed, f"stage-{stages}", replicas)
    return _result(_stage_batch(zero_threshold(beta), float(K), y0, int(stages), seeds, cap, stepwise), stepwise)


@dataclass
class Refinement:
    h: np.ndarray
    estimates: list
    target: float

    @property
    def final(self) -> Estimate:
        return self.estimates[-1]

    @property
    def rel_error(self) -> float:
        return abs(self.final.mean - self.target) / self.target

    def errors(self) -> np.ndarray:
        return np.array([abs(e.mean - self.target) for e in self.estimates])


def refine(fn, hs: Sequence[float], target: float, **kw) -> Refinement:
    """Evaluate ``fn(h=..., **kw)`` on each mesh in ``hs``."""
    hs = np.asarray(hs, dtype=float)
    return Refinement(hs, [fn(h=float(h), **kw) for h in hs], target)


def two_stage_check(beta: float, K: float, stage_scale: float, h: float, replicas: int, seed: int,
                    z: float = 1.96):
    """Compare two-stage survival with the square of one-stage survival.

    Returns ``(two_stage, one_stage_squared, difference, half_width)``; the
    half-width combines both binomial errors (delta method for the square).
    """
    one = stage_survival(beta, K, stage_scale, h, replicas, seed, stages=1)
    two = stage_survival(beta, K, stage_scale, h, replicas, seed, stages=2)
    p1, p2 = one.mean, two.mean
    se1 = math.sqrt(max(p1 * (1 - p1), 1e-300) / one.n)
    se2 = math.sqrt(max(p2 * (1 - p2), 1e-300) / two.n)
    hw = z * math.sqrt(se2**2 + (2 * p1 * se1) ** 2)
    return two, p1 * p1, p2 - p1 * p1, hw


def write_refinement_csv(ref: Refinement, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["h", "estimate", "ci_lo", "ci_hi", "target"])
        for h, e in zip(ref.h, ref.estimates):
            wr.writerow([repr(float(h)), repr(e.mean), repr(e.ci_lo), repr(e.ci_hi), repr(ref.target)])
    return path
