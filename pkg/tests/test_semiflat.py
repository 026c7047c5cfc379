import math

import pytest

from skewflow import semiflat as sf


def test_alpha_values():
    assert sf.alpha(-0.5, 10) == pytest.approx(1.55)
    assert sf.stage_target(-0.5, 10) == pytest.approx(2**-1.55)
    assert sf.alpha(-0.5, 1e12) == pytest.approx((-0.5 - 1) / (2 * -0.5))
    with pytest.raises(ValueError):
        sf.alpha(0.5, 10)
    with pytest.raises(ValueError):
        sf.alpha(-0.5, 0)


def test_race_target_limits():
    assert sf.race_target(-0.25, 0.5) == pytest.approx(1.5**-2.5)
    assert sf.race_target(-0.25, 1e9) == pytest.approx(1.0)
    assert sf.race_target(-0.25, 1e-9) < 1e-6
    with pytest.raises(ValueError):
        sf.race_target(0.25, 0.5)


def test_params_validation():
    sf.SemiflatParams(-0.5, 10, 0.5)
    with pytest.raises(ValueError):
        sf.SemiflatParams(0.5)
    with pytest.raises(ValueError):
        sf.SemiflatParams(-0.5, K=0)


def _agree(a, b):
    se = math.sqrt(a.mean * (1 - a.mean) / a.n + b.mean * (1 - b.mean) / b.n)
    return abs(a.mean - b.mean) < 4 * se


def test_race_chain_matches_stepwise():
    fast = sf.race_probability(-0.25, 0.5, 0.05, 10000, 1)
    slow = sf.race_probability(-0.25, 0.5, 0.05, 10000, 2, stepwise=True, cap=10**7)
    assert _agree(fast, slow)


def test_stage_chain_matches_stepwise():
    fast = sf.stage_survival(-0.5, 10, 1.0, 0.05, 10000, 1)
    slow = sf.stage_survival(-0.5, 10, 1.0, 0.05, 10000, 2, stepwise=True, cap=10**7)
    assert _agree(fast, slow)


def test_estimates_near_targets():
    e = sf.race_probability(-0.25, 0.5, 0.01, 20000, 3)
    assert abs(e.mean - sf.race_target(-0.25, 0.5)) < 0.1 * sf.race_target(-0.25, 0.5)
    e = sf.stage_survival(-0.5, 10, 1.0, 0.01, 20000, 3)
    assert abs(e.mean - sf.stage_target(-0.5, 10)) < 0.1 * sf.stage_target(-0.5, 10)


def test_one_sided_limit():
    # with a huge K only the downward excursions can end a stage
    e = sf.stage_survival(-0.5, 1e6, 1.0, 0.01, 20000, 4)
    t = 2 ** (-(-0.5 - 1) / (2 * -0.5))
    assert abs(e.mean - t) < 0.1 * t


def test_two_stage_multiplicative():
    two, sq, diff, hw = sf.two_stage_check(-0.5, 10, 1.0, 0.01, 20000, 5)
    assert abs(diff) <= hw


def test_errors_and_csv(tmp_path):
    with pytest.raises(ValueError):
        sf.race_probability(-0.25, 0.5, 0.01, 0, 1)
    with pytest.raises(ValueError):
        sf.stage_survival(-0.5, 10, 1.0, 0.01, 0, 1)
    with pytest.raises(ValueError):
        sf.stage_survival(-0.5, 10, 1.0, 2.0, 10, 1)
    ref = sf.refine(sf.race_probability, [0.04, 0.02], sf.race_target(-0.25, 0.5), beta=-0.25, epsilon=0.5,
                    replicas=2000, seed=1)
    assert len(ref.estimates) == 2 and ref.errors().shape == (2,)
    out = sf.write_refinement_csv(ref, tmp_path / "r.csv")
    assert out.read_text().splitlines()[0] == "h,estimate,ci_lo,ci_hi,target"


def test_beta_below_one_third():
    # the race formula is also checked outside the range where it was first derived
    e = sf.race_probability(-0.5, 0.5, 0.01, 20000, 6)
    t = sf.race_target(-0.5, 0.5)
    assert abs(e.mean - t) < 0.1 * t
