"""Named verification experiments shared by the command line and the test suite.

Every experiment takes a flat parameter dict (defaults below, overridable) and
returns an :class:`Outcome`: one headline estimate with interval and target,
the individual checks behind the pass/fail verdict, and raw rows for CSV.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import flow as fl
from . import lenslaw as ll
from . import semiflat as sf
from . import zjprocess as zj
from .seeding import derive_seed, derive_seeds, philox
from .stats import ks_one_sample, ks_two_sample, normal_interval

__all__ = ["Outcome", "REGISTRY", "DEFAULTS", "run_experiment", "path_functionals"]


@dataclass
class Outcome:
    estimate: float
    ci_lo: float
    ci_hi: float
    target: float
    checks: dict = field(default_factory=dict)
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())


def _within(est, target, k=4.0):
    """``|mean - target| <= k`` standard errors, using the 95% half-width of ``est``."""
    se = est.half_width / 1.96
    return abs(est.mean - target) <= k * max(se, 1e-300)


# --- (Z, J) experiments ---


def exp_hitting(p):
    beta, z, j, v = p["beta"], p["z"], int(p["j"]), p["v"]
    b, jj = abs(zj.check_beta(beta)), (int(j) if beta > 0 else 1 - int(j))
    n = int(p["replicas"])
    tgt = zj.closed_hitting(z, j, v, beta)
    maxz = []
    for bi in range(0, n, zj.BLOCK):
        size = min(zj.BLOCK, n - bi)
        r = zj.run_batch(z, jj, b, zj.PLAIN, zj.Stop(ceiling=v, floor=p["eps"] * z), size,
                         philox(p["seed"], bi // zj.BLOCK))
        maxz.append(r.max_z)
    maxz = np.concatenate(maxz)
    est = zj.wilson_interval(int(np.sum(maxz >= v)), n)
    rows = [[i, float(m), int(m >= v)] for i, m in enumerate(maxz)]
    return Outcome(est.mean, est.ci_lo, est.ci_hi, tgt, {"within_4_halfwidths": _within(est, tgt)},
                   ["replica", "max_z", "hit"], rows)


def _potential_edges(x):
    return np.concatenate([np.linspace(0.1 * x, x, 11), np.linspace(x, 3 * x, 11)[1:]])


def exp_potential(p):
    beta, x, j = p["beta"], p["x"], int(p["j"])
    edges = _potential_edges(x)
    mean, lo, hi = zj.estimate_potential(x, j, abs(beta), edges, int(p["replicas"]), p["seed"],
                                         eps=p["eps"] * x)
    rows, frac = [], []
    for k in (0, 1):
        inside = 0
        for i in range(edges.size - 1):
            c = zj.potential_bin_average(x, j, k, abs(beta), edges[i], edges[i + 1])
            ok = lo[k, i] <= c <= hi[k, i]
            inside += ok
            rows.append([k, edges[i], edges[i + 1], mean[k, i], lo[k, i], hi[k, i], c, int(ok)])
        frac.append(inside / (edges.size - 1))
    est = min(frac)
    return Outcome(est, est, est, 0.9, {"k0_bins": frac[0] >= 0.9, "k1_bins": frac[1] >= 0.9},
                   ["k", "bin_lo", "bin_hi", "mean", "ci_lo", "ci_hi", "closed_form", "inside"], rows)


def exp_jump_law(p):
    beta = abs(zj.check_beta(p["beta"]))
    n = int(p["replicas"])
    u = zj.open_uniform(philox(p["seed"]), n)
    z0 = p["z"]
    w = zj.next_levels(np.full(n, z0), np.zeros(n, dtype=np.int64), beta, zj.PLAIN, u)
    ratio = np.sort(w / z0)
    expo = (1 - beta) / (2 * beta)
    d, pv = ks_one_sample(ratio, lambda r: np.clip(r, 0, 1) ** expo)
    return Outcome(pv, pv, pv, 0.01, {"ks_p_gt_0.01": pv > 0.01}, ["ratio"], [[float(r)] for r in ratio])


def exp_return_prob(p):
    est = zj.estimate_return_probability(p["beta"], int(p["replicas"]), p["seed"], x=p["x"])
    tgt = zj.return_probability(p["beta"])
    return Outcome(est.mean, est.ci_lo, est.ci_hi, tgt, {"within_4_halfwidths": _within(est, tgt)},
                   ["successes", "n"], [[int(round(est.mean * est.n)), est.n]])


def exp_martingale(p):
    beta, z, j, v = abs(zj.check_beta(p["beta"])), p["z"], int(p["j"]), p["v"]
    eps = p["eps"] * z
    n = int(p["replicas"])
    vals = []
    for bi in range(0, n, zj.BLOCK):
        size = min(zj.BLOCK, n - bi)
        r = zj.run_batch(z, j, beta, zj.PLAIN, zj.Stop(ceiling=v, floor=eps), size, philox(p["seed"], bi // zj.BLOCK))
        hv = np.where(r.j_end == 1, r.z_end, r.z_end * (1 - beta) / (1 + beta))
        vals.append(hv)
    vals = np.concatenate(vals)
    est = normal_interval(vals)
    tgt = zj.harmonic_h(z, j, beta)
    return Outcome(est.mean, est.ci_lo, est.ci_hi, tgt, {"within_4_se": _within(est, tgt)},
                   ["replica", "h_at_stop"], [[i, float(x)] for i, x in enumerate(vals)])


def exp_duality_m(p):
    beta, b = abs(zj.check_beta(p["beta"])), p["b"]
    edges = np.linspace(0.05 * b, 0.95 * b, 11)
    mean, lo, hi = zj.estimate_ascent_occupation(b, beta, edges, int(p["replicas"]), p["seed"])
    rows, inside = [], 0
    for k in (0, 1):
        for i in range(edges.size - 1):
            c = zj.duality_bin_average(k, b, beta, edges[i], edges[i + 1])
            ok = lo[k, i] <= c <= hi[k, i]
            inside += ok
            rows.append([k, edges[i], edges[i + 1], mean[k, i], lo[k, i], hi[k, i], c, int(ok)])
    est = inside / (2 * (edges.size - 1))
    return Outcome(est, est, est, 0.9, {"bins_inside": est >= 0.9},
                   ["flag", "bin_lo", "bin_hi", "mean", "ci_lo", "ci_hi", "m", "inside"], rows)


def _occupation_above(path: zj.ZJPath, level: float, t_from: float, t_to: float) -> float:
    t, z = path.t, path.z
    total = 0.0
    for i in range(t.size - 1):
        a, b = max(t[i], t_from), min(t[i + 1], t_to)
        if b <= a:
            continue
        za = z[i] + (z[i + 1] - z[i]) * (a - t[i]) / (t[i + 1] - t[i])
        zb = z[i] + (z[i + 1] - z[i]) * (b - t[i]) / (t[i + 1] - t[i])
        lo_, hi_ = min(za, zb), max(za, zb)
        if hi_ <= level:
            continue
        if lo_ >= level:
            total += b - a
        else:
            total += (b - a) * (hi_ - level) / (hi_ - lo_)
    return total


def path_functionals(path: zj.ZJPath, b: float) -> tuple[float, float, float, float, float, float]:
    """(ascent duration, descent duration, jumps before max, jumps after max, time above b/2 before, after)."""
    k = int(np.argmax(path.z))
    nu = path.t[k]
    thr = 0.01 * b
    inner = path.z >= thr
    before = int(np.sum(inner[1:k]))
    after = int(np.sum(inner[k + 1 : -1]))
    # rounding keeps the atom at (b/2)/beta (one monotone pass) from splitting across an ulp
    r = lambda x: round(float(x), 9)
    return (
        r(nu - path.t[0]),
        r(path.t[-1] - nu),
        before,
        after,
        r(_occupation_above(path, b / 2, path.t[0], nu)),
        r(_occupation_above(path, b / 2, nu, path.t[-1])),
    )


def exp_time_reversal(p):
    beta, b, n = abs(zj.check_beta(p["beta"])), p["b"], int(p["replicas"])
    paths = zj.conditioned_max_path(b, beta, None, None, p["seed"], n=n)
    fwd = np.array([path_functionals(q, b) for q in paths])
    rev = np.array([path_functionals(zj.reverse_path(q), b) for q in paths])
    checks, pvals, rows = {}, [], []
    for name, col in (("duration", 0), ("jumps", 2), ("occupation", 4)):
        _, pv = ks_two_sample(fwd[:, col], rev[:, col])
        checks[f"{name}_ks"] = pv > 0.01
        pvals.append(pv)
    # descent built by h_minus versus an independent, time-reversed h-ascent
    desc = zj.descent_paths(b, beta, n, derive_seed(p["seed"], "descent"))
    asc = zj.ascent_paths(b, beta, n, derive_seed(p["seed"], "ascent"))
    d_dur = np.array([q.duration for q in desc])
    a_dur = np.array([q.duration for q in asc])
    d_first = np.array([q.z[1] for q in desc])
    a_last = np.array([q.z[-2] for q in asc])
    for name, x, y in (("descent_duration", d_dur, a_dur), ("descent_first_level", d_first, a_last)):
        _, pv = ks_two_sample(x, y)
        checks[f"{name}_ks"] = pv > 0.01
        pvals.append(pv)
    # orientation of the flag: forward j=1 on rising segments, reversed j=1 on falling ones
    orient = True
    for q in paths[:200]:
        r = zj.reverse_path(q)
        s_f, s_r = np.sign(np.diff(q.z)), np.sign(np.diff(r.z))
        orient &= bool(np.all((q.j[:-1] == 1) == (s_f > 0)) and np.all((r.j[:-1] == 1) == (s_r < 0)))
    checks["flag_orientation"] = orient
    for i in range(n):
        rows.append([i, *fwd[i].tolist(), *rev[i].tolist()])
    pm = float(min(pvals))
    header = ["path", "asc", "desc", "jumps_before", "jumps_after", "occ_before", "occ_after",
              "rev_asc", "rev_desc", "rev_jumps_before", "rev_jumps_after", "rev_occ_before", "rev_occ_after"]
    return Outcome(pm, pm, pm, 0.01, checks, header, rows)


# --- lens experiments ---


def exp_lens_tail(p):
    beta, a = abs(fl.check_beta(p["beta"])), p["a"]
    f = (1 - beta) / (1 + beta)
    checks, rows = {}, []
    tails = ll.lens_exact_tail(beta, a, [2 * a, 4 * a, 8 * a], int(p["replicas"]), p["seed"])
    for v, e in tails.items():
        checks[f"exact_v{v:g}"] = _within(e, a / v)
        rows.append(["exact", v, 0.0, e.mean, e.ci_lo, e.ci_hi, a / v])
    eps, v, h0 = p["eps"], p["v"], p["h"]
    nf = int(p["flow_replicas"])
    seed = derive_seed(p["seed"], "flow-tail")
    norm = []
    for lev in range(3):
        h = h0 / 2**lev
        e, gap, _ = ll.qxy_tail(-eps, 0.0, beta, h, v, nf, seed + lev)
        s = v / gap
        norm.append((e.mean * s, e.ci_lo * s, e.ci_hi * s, e, gap))
        rows.append(["flow_left", v, h, e.mean * s, e.ci_lo * s, e.ci_hi * s, 1.0])
    width = norm[-1][2] - norm[-1][1]
    checks["refine_1"] = abs(norm[1][0] - norm[0][0]) < norm[1][2] - norm[1][1]
    checks["refine_2"] = abs(norm[2][0] - norm[1][0]) < width
    fin = norm[-1][3]
    se_fin = (fin.half_width / 1.96) * v / norm[-1][4]
    checks["flow_tail_1_over_v"] = abs(norm[-1][0] - 1.0) <= 4 * se_fin
    e_r, gap_r, _ = ll.qxy_tail(0.0, eps, beta, h0 / 4, v, nf, seed + 10)
    p_l, p_r = fin.mean, e_r.mean
    ratio = (p_r / gap_r) / (p_l / norm[-1][4])
    rel = math.sqrt((1 - p_l) / (p_l * nf) + (1 - p_r) / (p_r * nf))
    rlo, rhi = ratio * math.exp(-1.96 * rel), ratio * math.exp(1.96 * rel)
    checks["side_ratio"] = rlo <= f <= rhi
    rows.append(["flow_ratio", v, h0 / 4, ratio, rlo, rhi, f])
    est = norm[-1]
    return Outcome(est[0], est[1], est[2], 1.0, checks,
                   ["kind", "v", "h", "estimate", "ci_lo", "ci_hi", "target"], rows)


def _independence(p):
    return ll.independence_and_max(p["beta"], p["x1"], p["x2"], p["x3"], int(p["ind_realizations"]),
                                   derive_seed(p["seed"], "independence"), max_steps=int(p["max_steps"]))


def exp_lens_intensity(p):
    beta, a, v = p["beta"], p["a"], p["v"]
    f = (1 - abs(beta)) / (1 + abs(beta))
    res = ll.grid_point_process(beta, int(p["n"]), a, v, int(p["realizations"]), p["seed"])
    tgt = (a / v) * (1 + f)
    est = res.mean_count
    pv, viol, checked, unresolved = _independence(p)
    checks = {
        "mean_within_10pct": abs(est.mean - tgt) <= 0.1 * tgt,
        "poisson_dispersion": res.dispersion_ci[0] <= 1.0 <= res.dispersion_ci[1],
        "window_uncorrelated": res.window_corr_ci[0] <= 0.0 <= res.window_corr_ci[1],
        "independence_p": pv > 0.01,
        "max_identity": viol == 0 and checked > 0,
    }
    rows = [[i, int(a_), int(b_)] for i, (a_, b_) in enumerate(zip(res.counts_nonpos, res.counts_pos))]
    return Outcome(est.mean, est.ci_lo, est.ci_hi, tgt, checks, ["realization", "count_x_le_0", "count_x_gt_0"], rows)


def exp_independence_max(p):
    pv, viol, checked, unresolved = _independence(p)
    checks = {"independence_p": pv > 0.01, "max_identity": viol == 0 and checked > 0}
    return Outcome(pv, pv, pv, 0.01, checks, ["chi2_p", "violations", "checked", "unresolved"],
                   [[pv, viol, checked, unresolved]])


def exp_weight_factor(p):
    beta = p["beta"]
    wf = ll.weight_factor_estimate(beta, p["v"], int(p["n"]), p["a"], int(p["realizations"]), p["seed"])
    f = (1 - abs(beta)) / (1 + abs(beta))
    light = wf.nonpos if wf.light_side == "x<=0" else wf.pos
    rows = [["x<=0", wf.nonpos.mean, wf.nonpos.ci_lo, wf.nonpos.ci_hi, int(wf.light_side == "x<=0")],
            ["x>0", wf.pos.mean, wf.pos.ci_lo, wf.pos.ci_hi, int(wf.light_side == "x>0")]]
    return Outcome(light.mean, light.ci_lo, light.ci_hi, f, {"unordered_pair": wf.matches(beta)},
                   ["side", "weight", "ci_lo", "ci_hi", "light"], rows)


# --- semi-flat ---


def _refinement_rows(ref):
    return [[float(h), e.mean, e.ci_lo, e.ci_hi, ref.target] for h, e in zip(ref.h, ref.estimates)]


def exp_race(p):
    hs = [p["h"] / 2**i for i in range(3)]
    tgt = sf.race_target(p["beta"], p["eps"])
    ref = sf.refine(sf.race_probability, hs, tgt, beta=p["beta"], epsilon=p["eps"], replicas=int(p["replicas"]),
                    seed=p["seed"])
    e = ref.final
    return Outcome(e.mean, e.ci_lo, e.ci_hi, tgt, {"rel_error_le_10pct": ref.rel_error <= 0.1},
                   ["h", "estimate", "ci_lo", "ci_hi", "target"], _refinement_rows(ref))


def exp_stage(p):
    hs = [p["h"] / 2**i for i in range(3)]
    tgt = sf.stage_target(p["beta"], p["K"])
    ref = sf.refine(sf.stage_survival, hs, tgt, beta=p["beta"], K=p["K"], stage_scale=p["scale"],
                    replicas=int(p["replicas"]), seed=p["seed"])
    two, sq, diff, hw = sf.two_stage_check(p["beta"], p["K"], p["scale"], hs[-1], int(p["replicas"]),
                                           derive_seed(p["seed"], "two-stage"))
    e = ref.final
    rows = _refinement_rows(ref) + [[float(hs[-1]), two.mean, two.ci_lo, two.ci_hi, sq]]
    return Outcome(e.mean, e.ci_lo, e.ci_hi, tgt,
                   {"rel_error_le_10pct": ref.rel_error <= 0.1, "two_stage": abs(diff) <= hw},
                   ["h", "estimate", "ci_lo", "ci_hi", "target"], rows)


# --- flow structure ---


def exp_flow_gaps(p):
    beta, n, dt, m = p["beta"], int(p["n_steps"]), p["dt"], p["M"]
    viol = close = skipped = 0
    rows = []
    step0_ok = True
    for r in range(int(p["runs"])):
        noise = fl.gen_noise(n, dt, derive_seed(p["seed"], "flow-gaps", r))
        h = noise.h
        f = fl.simulate_flow(noise, beta, np.arange(-m, m + 1e-9, 4 * h))
        y1, y2, mid = fl.gap_structure(f, 0)
        step0_ok &= len(mid) == 0
        for st in (n // 4, n // 2, n):
            y1, y2, mid = fl.gap_structure(f, st)
            if not (np.isfinite(y1) and np.isfinite(y2)):
                skipped += 1
                continue
            img = f.positions[:, st]
            out = (img < y1 - 1e-12) | (img > y2 + 1e-12)
            bad = int(np.sum(out & (f.lhat_units[:, st] != 0)))
            tight = int(np.sum(np.diff(mid) < 2 * h - 1e-12)) if len(mid) > 1 else 0
            viol += bad
            close += tight
            rows.append([r, st, y1, y2, len(mid), bad, tight])
    checks = {"outside_lhat_zero": viol == 0, "middle_spacing": close == 0, "step0_empty": step0_ok,
              "some_checked": len(rows) > 0}
    return Outcome(float(viol), float(viol), float(viol), 0.0, checks,
                   ["run", "step", "y1", "y2", "middle_size", "lhat_violations", "spacing_violations"], rows)


def flow_structure_violations(f: fl.FlowPaths) -> dict:
    """Violation counts of order, coalescence absorption, local-time identity and modulus for one run."""
    k = f.k
    mono = int(np.sum(np.diff(k, axis=0) < 0))
    eq = k[:-1] == k[1:]
    absorb = int(np.sum(eq[:, :-1] & ~eq[:, 1:]))
    # local time rebuilt from the kicks the rule prescribes, independently of the identity
    u = np.asarray(f.noise.uniforms)
    xi = np.where(u >= 0.5, 1, -1)
    d = np.where(u >= fl.zero_threshold(f.beta), 1, -1)
    kick = np.where(k[:, :-1] == 0, (d - xi)[None, :], 0)
    rebuilt = np.zeros_like(k)
    np.cumsum(kick, axis=1, out=rebuilt[:, 1:])
    ident = int(np.sum(rebuilt != f.lhat_units))
    lhat = f.lhat
    nondec = int(np.sum(np.diff(lhat, axis=1) < -1e-12))
    ratio, excess = fl.modulus_report(f, (0, f.noise.n_steps))
    return {"monotone": mono, "absorption": absorb, "identity": ident + nondec, "modulus": int(excess > 1e-12),
            "ratio": ratio, "excess": excess}


def exp_modulus(p):
    beta = abs(fl.check_beta(p["beta"]))
    rows, total = [], 0
    rng = philox(derive_seed(p["seed"], "modulus-points"))
    for r in range(int(p["runs"])):
        b = beta if r % 2 == 0 else -beta
        noise = fl.gen_noise(int(p["n_steps"]), p["dt"], derive_seed(p["seed"], "modulus", r))
        pts = rng.uniform(-p["spread"], p["spread"], int(p["walkers"]))
        v = flow_structure_violations(fl.simulate_flow(noise, b, pts))
        bad = v["monotone"] + v["absorption"] + v["identity"] + v["modulus"]
        total += bad
        rows.append([r, b, v["monotone"], v["absorption"], v["identity"], v["modulus"], v["ratio"], v["excess"]])
    return Outcome(float(total), float(total), float(total), 0.0, {"zero_violations": total == 0},
                   ["run", "beta", "monotone", "absorption", "identity", "modulus", "worst_ratio", "excess"], rows)


_ZJ = {"beta": 0.5, "seed": 1}
DEFAULTS: dict[str, dict] = {
    "hitting": {**_ZJ, "z": 1.0, "j": 1, "v": 2.0, "replicas": 100_000, "eps": 1e-8},
    "potential": {**_ZJ, "x": 1.0, "j": 0, "replicas": 100_000, "eps": 1e-4},
    "jump-law": {**_ZJ, "z": 1.0, "replicas": 10_000},
    "return-prob": {**_ZJ, "x": 1.0, "replicas": 100_000},
    "martingale": {**_ZJ, "z": 1.0, "j": 0, "v": 4.0, "replicas": 100_000, "eps": 1e-3},
    "duality-m": {**_ZJ, "b": 1.0, "replicas": 100_000},
    "time-reversal": {**_ZJ, "b": 1.0, "replicas": 5_000},
    "lens-tail": {**_ZJ, "a": 1.0, "replicas": 100_000, "eps": 0.08, "v": 1.0, "h": 0.02, "flow_replicas": 100_000},
    "lens-intensity": {**_ZJ, "n": 7, "a": 1.0, "v": 0.25, "realizations": 1000, "x1": -0.2, "x2": 0.0, "x3": 0.2,
                       "ind_realizations": 2000, "max_steps": 1_000_000},
    "independence-max": {**_ZJ, "x1": -0.2, "x2": 0.0, "x3": 0.2, "ind_realizations": 2000, "max_steps": 1_000_000},
    "weight-factor": {**_ZJ, "n": 7, "a": 1.0, "v": 0.25, "realizations": 1000},
    "race-25": {"beta": -0.25, "seed": 1, "eps": 0.5, "h": 0.02, "replicas": 40_000},
    "stage-22": {"beta": -0.5, "seed": 1, "K": 10.0, "scale": 1.0, "h": 0.02, "replicas": 40_000},
    "flow-gaps": {**_ZJ, "runs": 20, "n_steps": 10_000, "dt": 1e-4, "M": 2.0},
    "modulus": {**_ZJ, "runs": 100, "n_steps": 100_000, "dt": 1e-5, "walkers": 64, "spread": 0.5},
}

REGISTRY: dict[str, Callable] = {
    "hitting": exp_hitting,
    "potential": exp_potential,
    "jump-law": exp_jump_law,
    "return-prob": exp_return_prob,
    "martingale": exp_martingale,
    "duality-m": exp_duality_m,
    "time-reversal": exp_time_reversal,
    "lens-tail": exp_lens_tail,
    "lens-intensity": exp_lens_intensity,
    "independence-max": exp_independence_max,
    "weight-factor": exp_weight_factor,
    "race-25": exp_race,
    "stage-22": exp_stage,
    "flow-gaps": exp_flow_gaps,
    "modulus": exp_modulus,
}

# parameters that must be positive integers / positive reals
_POS_INT = {"replicas", "realizations", "ind_realizations", "runs", "n_steps", "walkers", "max_steps", "n",
            "flow_replicas"}
_POS_REAL = {"z", "v", "x", "b", "a", "eps", "h", "K", "scale", "dt", "M", "spread"}


def validate(name: str, params: dict) -> dict:
    if name not in REGISTRY:
        raise ValueError(f"unknown experiment {name!r}")
    out = dict(DEFAULTS[name])
    for k, v in params.items():
        if k not in out:
            raise ValueError(f"experiment {name!r} has no parameter {k!r}")
        if isinstance(out[k], float):
            out[k] = float(v)
        else:
            x = float(v)
            if x != int(x):
                raise ValueError(f"{k} must be an integer")
            out[k] = int(x)
    fl.check_beta(out["beta"])
    if name in ("race-25", "stage-22") and out["beta"] >= 0:
        raise ValueError("this experiment needs beta < 0")
    if name not in ("race-25", "stage-22", "modulus", "flow-gaps") and out["beta"] <= 0:
        raise ValueError("this experiment needs beta > 0")
    for k, v in out.items():
        if k in _POS_INT and v < 1:
            raise ValueError(f"{k} must be a positive integer")
        if k in _POS_REAL and not v > 0:
            raise ValueError(f"{k} must be positive")
    if "j" in out and out["j"] not in (0, 1):
        raise ValueError("j must be 0 or 1")
    return out


def run_experiment(name: str, params: dict | None = None) -> tuple[dict, Outcome]:
    """Validate parameters, run the experiment, return ``(params, outcome)``."""
    p = validate(name, params or {})
    # the experiment sees a seed mixed from the master seed and its own name
    run = dict(p, seed=derive_seed(p["seed"], name) & ((1 << 63) - 1))
    return p, REGISTRY[name](run)
