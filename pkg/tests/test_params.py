from fractions import Fraction

import pytest

from balansol.params import GeneralParams, ParameterError, SimpleParams, default_params

F = Fraction


def test_simple_defaults():
    p = SimpleParams()
    assert (p.R, p.beta, p.mu) == (F(74, 100), F(11, 10), F(1, 100))
    assert p.tiny_cut == p.critical_cut == F(26, 100)
    assert all(c.holds for c in p.inequalities())


def test_general_defaults():
    p = GeneralParams()
    assert (p.R, p.beta, p.mu) == (F(749, 1000), F(103, 100), F(1, 100))
    assert p.tiny_cut == p.critical_cut == F(1, 3)
    assert all(c.holds for c in p.inequalities())


def test_simple_named_inequalities():
    names = " ".join(c.name for c in SimpleParams().inequalities())
    for frag in ("2R - mu >= beta", "3R - 2beta >= 0", "beta(R - 1/2) >= 1 - R"):
        assert frag in names


def test_general_beta_perturbed_trips():
    with pytest.raises(ParameterError) as exc:
        GeneralParams(beta=F(12, 10))
    assert "3R - 1.1 >= beta" in str(exc.value)
    broken = GeneralParams(beta=F(12, 10), validate=False)
    assert sum(not c.holds for c in broken.inequalities()) >= 1


def test_simple_r_too_small():
    with pytest.raises(ParameterError):
        SimpleParams(R=F(7, 10))


def test_zero_mu_rejected():
    with pytest.raises(ParameterError):
        GeneralParams(mu=F(0))


def test_default_params_cached():
    assert default_params("simple") is default_params("simple")
    assert default_params("general") == GeneralParams()
    with pytest.raises(ValueError):
        default_params("other")
