import math

import pytest

import dynkin


def test_examples_listed():
    assert "zero_sum" in dynkin.example_names()


def test_zero_sum_solution():
    spec = dynkin.example("zero_sum")
    report = dynkin.solve(spec)
    eq = report["equilibrium"]
    assert eq["converged"]
    assert report["certificate"]["is_equilibrium"]
    assert eq["thresholds"]["l"] == pytest.approx((1 - math.sqrt(0.2)) / 2, abs=1e-9)
    assert report["spec_digest"] == dynkin.spec_digest(spec)


def test_utility_point():
    spec = dynkin.example("zero_sum")
    assert dynkin.utility(spec, 1, 0.2, 0.7) == pytest.approx((0.04 + 0.03 * 0.2 / 0.7) / 0.5)
    assert dynkin.utility(spec, 1, 0.7, 0.2) == -math.inf


def test_value_function_shape():
    spec = dynkin.example("zero_sum")
    v = dynkin.value_function(spec, 1, [(0.72, 1.0)], grid=256)
    assert len(v["x"]) == len(v["value"]) == len(v["in_contact"])
    assert all(val >= ob - 1e-12 for val, ob in zip(v["value"], v["obstacle"]))


def test_bad_spec_raises():
    with pytest.raises(ValueError):
        dynkin.solve("{not json")


def test_monte_carlo_is_seeded():
    spec = dynkin.example("zero_sum")
    a = dynkin.mc_payoff(spec, 1, 0.3, 0.7, 0.5, paths=2000, dt=1e-3)
    b = dynkin.mc_payoff(spec, 1, 0.3, 0.7, 0.5, paths=2000, dt=1e-3)
    assert a == b
