import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfdim import growth
from cfdim.growth import DoublyExp, Exponential, PowerLaw, ShiftedDoublyExp, Table


def test_exponents_families():
    assert growth.exponents(Exponential(4.0)) == growth.GrowthExponents(4.0, 1.0, "liminf")
    e = growth.exponents(DoublyExp(3.0))
    assert e.B == math.inf and e.b == 3.0
    assert growth.exponents(PowerLaw(2.0)).B == 1.0
    assert growth.exponents(ShiftedDoublyExp(2.0, 1.0, -1), "Phi2").limit_kind == "lim"


def test_exponents_numeric_limits():
    # log Phi(n)/n and log log Phi(n)/n at large n approach the symbolic values
    n = 10**6
    assert abs(growth.log_eval(Exponential(4.0, 7.0), n) / n - math.log(4.0)) < 1e-5
    assert abs(growth.log_eval(PowerLaw(2.0), n) / n) < 1e-4
    m = 400
    assert abs(math.log(growth.log_eval(DoublyExp(1.5, 2.0), m)) / m - math.log(1.5)) < 1e-2


def test_table_tails():
    with pytest.raises(growth.TableTailMissing):
        growth.exponents(Table(((1, 2.0),)))
    osc = Table((), Exponential(4.0), Exponential(9.0))
    assert growth.exponents(osc, "Phi1").B == 4.0
    assert growth.exponents(osc, "Phi2").limit_exists is False
    steady = Table(((1, 5.0),), Exponential(4.0))
    assert growth.exponents(steady, "Phi2").limit_exists is True
    assert growth.log_eval(steady, 1) == math.log(5.0)
    assert growth.log_eval(steady, 2) == 2 * math.log(4.0)


def test_invalid_specs():
    with pytest.raises(growth.GrowthSpecError):
        Exponential(1.0)
    with pytest.raises(growth.GrowthSpecError):
        DoublyExp(2.0, 0.0)
    with pytest.raises(growth.GrowthSpecError):
        PowerLaw(0.0)
    with pytest.raises(growth.GrowthSpecError):
        ShiftedDoublyExp(2.0, 1.0, 0.5)


def test_log_eval_large_n_finite():
    assert math.isfinite(growth.log_eval(Exponential(10.0), 10**6))
    assert math.isfinite(growth.log_eval(PowerLaw(3.0), 10**6))


@pytest.mark.parametrize("B", [2, 3, 5])
def test_incompatibility_e1_forced(B):
    inc = growth.incompatibility_test(Exponential(B**2), Exponential(B))
    assert inc.empty_forced and inc.n0 is not None


@pytest.mark.parametrize("B", [2, 3, 5])
def test_incompatibility_e2_not_forced(B):
    inc = growth.incompatibility_test(Exponential(B**2, 1.0 / B), Exponential(B, 3.0 * B))
    assert inc.verdict == growth.INCONCLUSIVE


def test_incompatibility_doubly_exponential():
    # 1 + 1/2 = 3/2 < 5 at the leading coefficient
    assert growth.incompatibility_test(DoublyExp(2.0, 5.0), ShiftedDoublyExp(2.0, 1.0, -1)).empty_forced
    assert not growth.incompatibility_test(DoublyExp(2.0), DoublyExp(2.0)).empty_forced


def test_incompatibility_numeric_agrees_on_horizon():
    inc = growth.incompatibility_test(Exponential(9.0), Exponential(3.0), horizon=40)
    for n in range(inc.n0, 41):
        lhs = growth.log_eval(Exponential(3.0), n) + growth.log_eval(Exponential(3.0), n - 1)
        assert lhs <= growth.log_eval(Exponential(9.0), n) + 1e-9


@pytest.mark.parametrize(
    "text,spec",
    [
        ("exp:B=9", Exponential(9.0)),
        ("exp:B=9,c=1/3", Exponential(9.0, 1 / 3)),
        ("dexp:b=2,beta=5", DoublyExp(2.0, 5.0)),
        ("dexpshift:b=2,beta=1,k=-1", ShiftedDoublyExp(2.0, 1.0, -1)),
        ("pow:a=2.5", PowerLaw(2.5)),
    ],
)
def test_parse(text, spec):
    assert growth.parse_spec(text) == spec


@pytest.mark.parametrize("bad", ["", "zz:B=2", "exp", "exp:B=x", "exp:q=2", "exp:B=2,B=3", "dexpshift:b=2,k=1.5"])
def test_parse_errors(bad):
    with pytest.raises(growth.GrowthSpecError):
        growth.parse_spec(bad)


finite = st.floats(min_value=1.0001, max_value=1e6, allow_nan=False)


@given(st.one_of(
    st.builds(Exponential, finite, st.floats(1e-3, 1e3)),
    st.builds(DoublyExp, finite, st.floats(1e-3, 1e3)),
    st.builds(ShiftedDoublyExp, finite, st.floats(1e-3, 1e3), st.integers(-5, 5)),
    st.builds(PowerLaw, st.floats(1e-3, 1e3)),
))
def test_format_roundtrip(spec):
    assert growth.parse_spec(growth.format_spec(spec)) == spec


def test_eventually_le_undecidable():
    a = growth.log_expansions(Exponential(2.0, 3.0))
    assert growth.eventually_le(a, a) is True
    b = growth.log_expansions(Exponential(2.0, 2.0))
    assert growth.eventually_le(a, b) is False
