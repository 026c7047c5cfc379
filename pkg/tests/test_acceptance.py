"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line and records it for the summary
printed at the end of the pytest run. All runs use master seed 1.
"""
import pytest

from conftest import ACCEPTANCE
from skewflow.experiments import run_experiment

BETAS = (0.25, 0.5, 0.75)


def _record(k, ok, msg):
    ACCEPTANCE[k] = (bool(ok), msg)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {msg}")
    assert ok, msg


def _failed(outcome):
    return [k for k, v in outcome.checks.items() if not v]


def test_criterion_01_hitting():
    bad, n = [], 0
    for beta in BETAS:
        for j in (0, 1):
            for v in (2.0, 4.0, 8.0):
                _, o = run_experiment("hitting", {"beta": beta, "z": 1.0, "j": j, "v": v, "replicas": 100_000})
                n += 1
                if not o.passed:
                    bad.append(f"beta={beta} j={j} v={v}: {o.estimate:.4f} vs {o.target:.4f}")
    _record(1, not bad, f"{n - len(bad)}/{n} cells within 4 Wilson half-widths" + ("; " + "; ".join(bad) if bad else ""))


def test_criterion_02_jump_law():
    ps = {b: run_experiment("jump-law", {"beta": b, "replicas": 10_000})[1].estimate for b in BETAS}
    _record(2, all(p > 0.01 for p in ps.values()),
            "KS p-values " + ", ".join(f"beta={b}: {p:.3f}" for b, p in ps.items()))


def test_criterion_03_return_probability():
    _, o = run_experiment("return-prob", {"beta": 0.5, "replicas": 100_000})
    _record(3, o.passed, f"estimate {o.estimate:.4f} [{o.ci_lo:.4f}, {o.ci_hi:.4f}] vs {o.target:.4f}")


def test_criterion_04_potential():
    fr = {}
    for j in (0, 1):
        _, o = run_experiment("potential", {"beta": 0.5, "x": 1.0, "j": j, "replicas": 100_000})
        fr[j] = (o.passed, o.estimate)
    _record(4, all(ok for ok, _ in fr.values()),
            "min fraction of bins inside CI per branch: " + ", ".join(f"j={j}: {f:.2f}" for j, (_, f) in fr.items()))


def test_criterion_05_martingale():
    bad, n = [], 0
    for beta in BETAS:
        for j in (0, 1):
            _, o = run_experiment("martingale", {"beta": beta, "z": 1.0, "j": j, "v": 4.0, "replicas": 100_000})
            n += 1
            if not o.passed:
                bad.append(f"beta={beta} j={j}: {o.estimate:.4f} vs {o.target:.4f}")
    _record(5, not bad, f"{n - len(bad)}/{n} cells within 4 standard errors" + ("; " + "; ".join(bad) if bad else ""))


def test_criterion_06_duality_measure():
    _, o = run_experiment("duality-m", {"beta": 0.5, "b": 1.0, "replicas": 100_000})
    _record(6, o.passed, f"fraction of bins inside CI {o.estimate:.2f}")


def test_criterion_07_time_reversal():
    _, o = run_experiment("time-reversal", {"beta": 0.5, "b": 1.0, "replicas": 5000})
    _record(7, o.passed, f"min KS p-value {o.estimate:.3f}; failed checks {_failed(o)}")


def test_criterion_08_lens_tail():
    _, o = run_experiment("lens-tail", {"beta": 0.5, "a": 1.0})
    _record(8, o.passed, f"normalized flow tail {o.estimate:.3f} [{o.ci_lo:.3f}, {o.ci_hi:.3f}]; "
                         f"failed checks {_failed(o)}")


@pytest.mark.slow
def test_criterion_09_lens_intensity():
    _, o = run_experiment("lens-intensity", {"beta": 0.5})
    ok = o.passed and abs(o.estimate - o.target) <= 0.1 * o.target
    _record(9, ok, f"mean count {o.estimate:.3f} vs {o.target:.3f}; failed checks {_failed(o)}")


def test_criterion_10_semiflat():
    _, r = run_experiment("race-25", {})
    _, s = run_experiment("stage-22", {})
    _record(10, r.passed and s.passed,
            f"race {r.estimate:.4f} vs {r.target:.4f}; stage {s.estimate:.4f} vs {s.target:.4f}; "
            f"failed checks {_failed(r) + _failed(s)}")


@pytest.mark.slow
def test_criterion_11_flow_structure():
    _, o = run_experiment("modulus", {"runs": 100, "n_steps": 100_000, "walkers": 64, "beta": 0.5})
    _record(11, o.passed, f"violations over 100 runs (beta alternating +-0.5): {int(o.estimate)}")
