import json
import math

import ztr


def test_version_string():
    assert ztr.__version__.count(".") == 2


def test_suite_names():
    names = ztr.suite_names()
    assert "entropy" in names
    assert len(names) == 9


def test_theta_exact_zero():
    assert ztr.theta("-1*T^-1 + 2*T^0", "1/2") == "0"
    assert ztr.theta("1*T^1 + -1*T^4", "1/2") == "7/16"


def test_expansions_print_canonically():
    assert ztr.expand_real("3", "1/2", 2) == "1*T^-1 + 1*T^0"
    assert ztr.expand_bounded("1/2", "1/2") == "1*T^1"
    assert ztr.expand_padic(5, 2, 2, 3) == "1*T^0 + 1*T^2"


def test_parse_errors_are_value_errors():
    try:
        ztr.theta("2T^3", "1/2")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed series must raise")


def test_generator_certificate():
    cert = ztr.generator("1/2", "1/2", order=60)
    series = json.loads(cert["series"])
    assert series["terms"][0] == [0, "1"]
    assert cert["n_vanish"] >= 1


def test_ball_count_and_norm():
    assert ztr.ball_count("1/2", "1", 1) == 7
    assert ztr.ball_count("1/2", "1", 2) == 23
    assert ztr.weighted_norm("2*T^0 + -3*T^2", "1/2") == "11/4"


def test_entropy_values():
    assert abs(ztr.entropy_H([0.5, 0.5]) - math.log(2)) < 1e-12
    assert abs(ztr.entropy_defect(1.0, 1.0) - 2 * math.log(2)) < 1e-12
    assert abs(ztr.collapse_ratio_uniform(150) - (1 + math.log(150))) < 1e-12


def test_homology_divisors():
    assert ztr.q_homology([2], 0) == ["2"]
    assert ztr.q_homology([2], 1) == ["2", "2"]
    assert ztr.q_homology([2, 3], 0) == ["6"]


def test_suite_run_is_deterministic():
    # plain ints are fine, values are stringified into the config
    params = {"grid": 40, "random": 400, "trials": 30, "pairs": 60, "hmax": 64}
    a = ztr.run_suite("entropy", params, seed=11)
    b = ztr.run_suite("entropy", params, seed=11)
    assert a == b
    rep = json.loads(a)
    assert rep["suite"] == "entropy"
    assert rep["summary"]["fail"] == 0
    assert rep["params"]["grid"] == "40"
