import itertools
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from cfdim import cf, kernels, pressure
from cfdim.pressure import Potential, SpectralConfig

SMALL = SpectralConfig(alphabet_max=3)


def brute_sum(potential, s, n, M):
    """Plain Python oracle: sum over words of exp(n alpha(s)) q_n^(-2s)."""
    total = 0.0
    for w in itertools.product(range(1, M + 1), repeat=n):
        total += cf.last_two(w)[3] ** (-2.0 * s)
    return n * potential.alpha(s) + math.log(total)


def test_alpha_shapes():
    assert Potential.sB(4.0).alpha(0.5) == -0.5 * math.log(4.0)
    assert Potential.s0(4.0).alpha(0.5) == -0.25 * math.log(4.0)
    assert Potential.g(16.0, 4.5).alpha(0.25) == pytest.approx(-0.25 * math.log(16) + 0.75 * math.log(4.5))
    assert Potential.zero().alpha(0.7) == 0.0


@pytest.mark.parametrize("bad", [("SB", 0.5), ("S0", 0.0), ("G", 1.0, 2.0), ("G", 2.0, 1.0), ("X", 2.0)])
def test_potential_validation(bad):
    with pytest.raises(ValueError):
        Potential(*bad)


@pytest.mark.parametrize("pot", [Potential.zero(), Potential.sB(2.0), Potential.s0(16.0), Potential.g(16.0, 4.5)])
@pytest.mark.parametrize("s", [0.3, 0.7, 1.0])
def test_direct_sum_against_brute_force(pot, s):
    for n, M in [(2, 2), (4, 3), (3, 5)]:
        assert abs(pressure.direct_sum(pot, s, n, M) - brute_sum(pot, s, n, M)) < 1e-12


def test_four_term_root():
    # 2^-2s + 2 * 3^-2s + 5^-2s = 1
    f = lambda s: 2 ** (-2 * s) + 2 * 3 ** (-2 * s) + 5 ** (-2 * s) - 1
    ref = brentq(f, 0.0, 1.5, xtol=1e-14)
    got = pressure.root_finite(Potential.zero(), 2, 2)
    assert abs(got - ref) < 1e-9
    # quoted to three digits
    assert abs(got - 0.655) < 1e-3


def test_root_finite_backends_identical():
    pot = Potential.sB(2.0)
    a = pressure.root_finite(pot, 10, 3, backend="numpy")
    b = pressure.root_finite(pot, 10, 3, backend="numba")
    assert a == b


def test_budget_and_no_root():
    with pytest.raises(pressure.BudgetExceeded):
        pressure.direct_sum(Potential.zero(), 0.5, 30, 3)
    # huge alphabet at depth 1: sum a^{-2s} over a <= 10^6 stays above 1 up to s = 0.5
    with pytest.raises(pressure.NoRoot):
        pressure.root_finite(Potential.zero(), 1, 10**6, upper=0.5)


@pytest.mark.parametrize("pot", [Potential.sB(2.0), Potential.g(16.0, 4.5), Potential.s0(16.0)])
def test_power_iteration_matches_dense_eigensolver(pot):
    for s in (0.4, 0.9):
        A = kernels.transfer_matrix(s, 3, 32)
        lam = max(abs(np.linalg.eigvals(A)))
        got = pressure.spectral_eigenvalue(pot, s, SMALL)
        assert abs(got - (pot.alpha(s) + math.log(lam))) < 1e-11


@pytest.mark.parametrize("pot", [Potential.sB(2.0), Potential.sB(16.0), Potential.s0(16.0), Potential.g(16.0, 4.5)])
def test_spectral_matches_cylinder_ratio(pot):
    for s in (0.3, 0.65, 1.0):
        spec = pressure.spectral_eigenvalue(pot, s, SMALL)
        ratio = pressure.ratio_oracle(pot, s, 12, 3)
        assert abs(spec - ratio) < 1e-5


def test_golden_mean_eigenvalue():
    lam = pressure.spectral_eigenvalue(Potential.zero(), 1.0, SpectralConfig(alphabet_max=1))
    assert abs(lam - math.log((3 - math.sqrt(5)) / 2)) < 1e-12


def test_bounded_type_two_regression():
    # dimension of {digits <= 2}: 0.531280506277205...
    v = pressure.dim_root(Potential.zero(), SpectralConfig(alphabet_max=2))
    assert abs(v - 0.5312805062772) < 1e-8


def test_spectral_backends_agree():
    cfg = SpectralConfig(alphabet_max=16)
    a = pressure.dim_root(Potential.sB(4.0), cfg, backend="numpy")
    b = pressure.dim_root(Potential.sB(4.0), cfg, backend="numba")
    assert abs(a - b) < 1e-10


def test_resolution_error_on_coarse_grid():
    with pytest.raises(pressure.ResolutionError):
        pressure.spectral_eigenvalue(Potential.zero(), 0.2, SpectralConfig(alphabet_max=200, nodes=8,
                                                                            resolution_tol=1e-14))


def test_config_validation():
    with pytest.raises(ValueError):
        SpectralConfig(nodes=4)
    with pytest.raises(ValueError):
        SpectralConfig(alphabet_max=0)


def test_monotone_in_B_and_ordering():
    cfg = SpectralConfig(alphabet_max=32)
    sb = [pressure.dim_root(Potential.sB(B), cfg) for B in (1.5, 2.0, 4.0, 16.0)]
    assert all(a > b for a, b in zip(sb, sb[1:]))
    for B in (2.0, 16.0):
        assert pressure.dim_root(Potential.s0(B), cfg) >= pressure.dim_root(Potential.sB(B), cfg)


def test_boundary_identity_small_alphabet():
    cfg = SpectralConfig(alphabet_max=32)
    s0 = pressure.dim_root(Potential.s0(16.0), cfg)
    g = pressure.dim_root(Potential.g(16.0, 16.0**s0), cfg)
    assert abs(g - s0) < 1e-8


def test_dimension_grows_with_alphabet():
    vals = [pressure.dim_root(Potential.sB(2.0), SpectralConfig(alphabet_max=M)) for M in (4, 8, 16)]
    assert vals == sorted(vals)


def test_extrapolation():
    ext = pressure.extrapolate_alphabet([(8, 0.5), (16, 0.54), (32, 0.56)])
    assert ext.value == 0.56 and abs(ext.error - 0.02) < 1e-15
    # geometric tail with ratio 1/2 adds one more increment
    assert abs(ext.extrapolated - 0.58) < 1e-12
    with pytest.raises(pressure.MonotonicityViolation):
        pressure.extrapolate_alphabet([(8, 0.5), (16, 0.4), (32, 0.6)])
    with pytest.raises(ValueError):
        pressure.extrapolate_alphabet([(8, 0.5), (16, 0.6)])
    with pytest.raises(ValueError):
        pressure.extrapolate_alphabet([(8, 0.5), (8, 0.6), (16, 0.7)])


def test_convergence_csv():
    text = pressure.convergence_csv([(3, 32, None, 0.5, -0.1, "spectral"), (3, None, 12, 0.5, -0.1, "ratio")])
    lines = text.splitlines()
    assert lines[0] == "M,K,n,s,value,method"
    assert lines[1] == "3,32,,0.5,-0.1,spectral"
    assert lines[2] == "3,,12,0.5,-0.1,ratio"
