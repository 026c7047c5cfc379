import math

import numpy as np
import pytest
from scipy import integrate

from skewflow import zjprocess as zj
from skewflow.seeding import philox
from skewflow.stats import ks_one_sample, ks_two_sample, wilson_interval
from skewflow.zjprocess import (
    FLOOR,
    H_UP,
    PLAIN,
    Stop,
    ZJState,
    h_minus,
    jump_level,
)


def test_jump_level_examples():
    assert jump_level(ZJState(1, 0), 0.5, PLAIN, 0.25) == pytest.approx(0.0625)
    assert jump_level(ZJState(1, 1), 0.5, PLAIN, 0.25) == pytest.approx(0.25 ** (-2 / 3))
    assert jump_level(ZJState(1, 1), 0.5, H_UP, 0.25) == pytest.approx(16.0)
    assert jump_level(ZJState(1, 0), 0.5, H_UP, 0.25) == pytest.approx(0.25 ** (2 / 3))


def test_jump_level_errors():
    with pytest.raises(ValueError):
        jump_level(ZJState(0.0, 1), 0.5, PLAIN, 0.5)
    with pytest.raises(ValueError):
        jump_level(ZJState(1.0, 1), 0.5, PLAIN, 1.0)
    with pytest.raises(ValueError):
        jump_level(ZJState(1.0, 1), 0.5, h_minus(1.0), 0.5)
    with pytest.raises(ValueError):
        zj.TransformKind("h_minus", -1.0)
    with pytest.raises(ValueError):
        ZJState(-1.0, 0)


def test_hminus_stays_below_ceiling():
    for z in (0.9, 0.999, 1 - 1e-9):
        for u in (1e-12, 1e-3, 0.5):
            w = jump_level(ZJState(z, 1), 0.5, h_minus(1.0), u)
            assert z <= w < 1.0


def _hminus_rate(s, j, b, beta):
    if j == 1:
        return (1 + beta * (b + s) / (b - s)) / (2 * s)
    return (1 - beta * beta) * (b - s) / (2 * s * (b - s + beta * (b + s)))


@pytest.mark.parametrize("beta", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("j,z", [(1, 0.3), (1, 0.95), (0, 0.7), (0, 0.05)])
@pytest.mark.parametrize("u", [0.9, 0.3, 0.01])
def test_hminus_inversion_against_quadrature(beta, j, z, u):
    # the integrated rate (on the local-time clock, dt = dz / beta) at the level equals -log u
    b = 1.0
    w = jump_level(ZJState(z, j), beta, h_minus(b), u)
    lo, hi = (z, w) if j == 1 else (w, z)
    val, _ = integrate.quad(lambda s: _hminus_rate(s, j, b, beta) / beta, lo, hi, limit=200, epsabs=1e-13,
                            epsrel=1e-12)
    assert val == pytest.approx(-math.log(u), rel=1e-8)


def test_negative_beta_relabels_flag():
    assert jump_level(ZJState(1, 1), -0.5, PLAIN, 0.25) == jump_level(ZJState(1, 0), 0.5, PLAIN, 0.25)
    assert zj.closed_hitting(1, 1, 2, -0.5) == zj.closed_hitting(1, 0, 2, 0.5)
    p = zj.simulate_zj(1.0, 1, -0.5, PLAIN, Stop(floor=1e-3), 3)
    q = zj.simulate_zj(1.0, 0, 0.5, PLAIN, Stop(floor=1e-3), 3)
    assert np.array_equal(p.z, q.z) and np.array_equal(p.j, 1 - q.j)


def test_plain_first_jump_law_from_up_state():
    n, beta = 20000, 0.5
    u = zj.open_uniform(philox(1), n)
    w = np.sort(zj.next_levels(np.ones(n), np.ones(n, dtype=int), beta, PLAIN, u))
    q = (1 + beta) / (2 * beta)
    _, p = ks_one_sample(w, lambda x: 1 - np.maximum(x, 1.0) ** (-q))
    assert p > 0.01


def test_h_up_matches_conditioned_plain():
    # plain paths from (1, 1) that reach V; their first flip level, if below V, follows the h-law
    beta, V, n = 0.5, 20.0, 200_000
    r = zj.run_batch(1.0, 1, beta, PLAIN, Stop(ceiling=V, floor=1e-6), n, philox(2), record=True)
    first = np.array([p.z[1] for p, t in zip(r.paths, r.terminal) if t == 1 and p.z[1] < V])
    expo = (1 - beta) / (2 * beta)
    norm = 1 - V ** (-expo)
    _, p = ks_one_sample(np.sort(first), lambda x: (1 - np.maximum(x, 1.0) ** (-expo)) / norm)
    assert first.size > 1000 and p > 0.01


def test_simulate_zj_structure():
    beta = 0.5
    for seed in range(20):
        p = zj.simulate_zj(1.0, 0, beta, PLAIN, Stop(floor=1e-8), seed)
        assert p.terminal == FLOOR and np.isfinite(p.t[-1])
        assert np.all(np.diff(p.t) > 0)
        dz = np.diff(p.z)
        assert np.allclose(np.diff(p.t), np.abs(dz) / beta)
        assert np.all((p.j[:-1] == 1) == (dz > 0))
        assert np.all(p.j[1:-1] != p.j[:-2])
        assert p.z[-1] == pytest.approx(1e-8)
        assert p.tail_bound == pytest.approx(1e-8 / beta)


def test_simulate_zj_stops():
    p = zj.simulate_zj(1.0, 1, 0.5, PLAIN, Stop(ceiling=1.5, floor=0.5), 4)
    assert p.terminal in (zj.CEILING, FLOOR)
    p = zj.simulate_zj(1.0, 1, 0.5, PLAIN, Stop(max_time=0.3), 4)
    assert p.terminal in (zj.HORIZON, FLOOR) and p.t[-1] <= 0.3 + 1e-12
    with pytest.raises(ValueError):
        Stop(ceiling=-1.0)
    with pytest.raises(ValueError):
        Stop(floor=0.0)
    with pytest.raises(ValueError):
        zj.simulate_zj(-1.0, 1, 0.5, PLAIN, Stop(floor=1e-3), 1)


def test_log_contraction_per_cycle():
    beta, n = 0.5, 200_000
    rng = philox(3)
    up = zj.next_levels(np.ones(n), np.ones(n, dtype=int), beta, PLAIN, zj.open_uniform(rng, n))
    down = zj.next_levels(up, np.zeros(n, dtype=int), beta, PLAIN, zj.open_uniform(rng, n))
    logs = np.log(down)
    target = -4 * beta**2 / (1 - beta**2)
    assert abs(logs.mean() - target) < 4 * logs.std() / math.sqrt(n)


def test_closed_forms():
    assert zj.closed_hitting(1, 1, 2, 0.5) == pytest.approx(0.5)
    assert zj.closed_hitting(1, 0, 2, 0.5) == pytest.approx(1 / 6)
    assert zj.closed_hitting(3, 0, 2, 0.3) == 1.0
    with pytest.raises(ValueError):
        zj.closed_hitting(0, 0, 2, 0.5)
    assert zj.closed_potential(1, 0, 0.5, 0, 0.5) == pytest.approx(3.0)
    assert zj.closed_potential(1, 0, 2, 0, 0.5) == pytest.approx(0.5)
    assert zj.closed_potential(1, 1, 0.5, 1, 0.5) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        zj.closed_potential(1, 0, -1, 0, 0.5)
    assert zj.harmonic_h(1, 1, 0.5) == 1.0
    assert zj.harmonic_h(1, 0, 0.5) == pytest.approx(1 / 3)
    assert zj.harmonic_h(0, 0, 0.5) == 0.0 and zj.harmonic_h(0, 1, 0.5) == 0.0
    assert zj.return_probability(0.5) == pytest.approx(1 / 3)
    assert zj.return_probability(0.999999) < 1e-6
    assert zj.duality_measure_m(0.5, 1, 1.0, 0.5) == pytest.approx(0.5)
    assert zj.duality_measure_m(0.5, 0, 1.0, 0.5) == pytest.approx(2.5)
    assert zj.duality_measure_m(1 - 1e-12, 1, 1.0, 0.5) < 1e-10
    with pytest.raises(ValueError):
        zj.duality_measure_m(1.5, 1, 1.0, 0.5)


def test_potential_bin_average_is_integral():
    for j in (0, 1):
        for k in (0, 1):
            exact, _ = integrate.quad(lambda z: zj.closed_potential(1, j, z, k, 0.5), 0.5, 2.5, points=[1.0])
            assert zj.potential_bin_average(1, j, k, 0.5, 0.5, 2.5) * 2.0 == pytest.approx(exact)


def test_potential_estimate_small():
    mean, lo, hi = zj.estimate_potential(1.0, 0, 0.5, [0.45, 0.55, 1.9, 2.1], 20000, 5)
    assert lo[0, 0] <= zj.potential_bin_average(1, 0, 0, 0.5, 0.45, 0.55) <= hi[0, 0]
    assert lo[0, 2] <= zj.potential_bin_average(1, 0, 0, 0.5, 1.9, 2.1) <= hi[0, 2]
    with pytest.raises(ValueError):
        zj.estimate_potential(1.0, 0, 0.5, [0.1, 1.0], 0, 1)


def test_total_occupation_below_start():
    # local time spent below x from (x, 0) has mean (x / (2 beta^2)) * ((1 + beta) + (1 - beta))
    beta = 0.5
    mean, lo, hi = zj.estimate_potential(1.0, 0, beta, [1e-3, 1.0], 40000, 6, eps=1e-5)
    total = mean[:, 0].sum() * (1.0 - 1e-3)
    exact = ((1 + beta) + (1 - beta)) / (2 * beta**2) * (1.0 - 1e-3)
    half = ((hi - lo)[:, 0].sum() / 2) * (1.0 - 1e-3)
    assert abs(total - exact) <= 2 * half


def test_return_probability_mc_small():
    e = zj.estimate_return_probability(0.5, 20000, 7)
    assert abs(e.mean - 1 / 3) < 4 * e.half_width / 1.96


def test_reverse_path_involution_and_orientation():
    paths = zj.conditioned_max_path(1.0, 0.5, None, None, 8, n=50)
    for p in paths:
        r = zj.reverse_path(p)
        assert r.duration == pytest.approx(p.duration)
        assert zj.reverse_path(r) == p
        sf, sr = np.sign(np.diff(p.z)), np.sign(np.diff(r.z))
        assert np.all((p.j[:-1] == 1) == (sf > 0))
        assert np.all((r.j[:-1] == 1) == (sr < 0))
    bad = zj.simulate_zj(1.0, 1, 0.5, PLAIN, Stop(ceiling=1.2, max_time=1.0), 1)
    if bad.terminal != FLOOR:
        with pytest.raises(ValueError):
            zj.reverse_path(bad)


def test_conditioned_max_path_shape():
    b = 2.0
    paths = zj.conditioned_max_path(b, 0.5, 1e-6, 1e-6, 9, n=200)
    for p in paths:
        k = int(np.argmax(p.z))
        assert p.z[k] == b
        assert np.sum(p.z == b) == 1  # the descent never comes back to b
        assert p.j[k] == 0
        assert p.terminal == FLOOR
    with pytest.raises(ValueError):
        zj.conditioned_max_path(1.0, 0.5, 2.0, 1e-3, 1)


def test_entrance_stability():
    durations = []
    for eps in (1e-5, 5e-6):
        asc = zj.ascent_paths(1.0, 0.5, 20000, 10, eps_entrance=eps)
        durations.append(np.array([a.duration for a in asc]))
    d, _ = ks_two_sample(*durations)
    assert d < 0.02


def test_ascent_occupation_matches_m_small():
    edges = np.array([0.2, 0.3, 0.7, 0.8])
    mean, lo, hi = zj.estimate_ascent_occupation(1.0, 0.5, edges, 40000, 11)
    for k in (0, 1):
        for i in (0, 2):
            c = zj.duality_bin_average(k, 1.0, 0.5, edges[i], edges[i + 1])
            assert lo[k, i] - (hi[k, i] - lo[k, i]) <= c <= hi[k, i] + (hi[k, i] - lo[k, i])


def test_zj_csv(tmp_path):
    p = zj.simulate_zj(1.0, 1, 0.5, PLAIN, Stop(floor=1e-3), 2)
    out = zj.write_zj_csv(p, tmp_path / "p.csv")
    rows = out.read_text().splitlines()
    assert rows[0] == "t,z,j" and len(rows) == p.t.size + 1
    back = np.loadtxt(out, delimiter=",", skiprows=1)
    assert np.array_equal(back[:, 1], p.z)


def test_hitting_small():
    r = zj.run_batch(1.0, 0, 0.5, PLAIN, Stop(ceiling=2.0, floor=1e-8), 30000, philox(12))
    e = wilson_interval(int(np.sum(r.terminal == 1)), 30000)
    assert abs(e.mean - 1 / 6) < 4 * e.half_width / 1.96
