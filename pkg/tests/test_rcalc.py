import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import tkz
from tkz.errors import ConfigurationError, DegenerateConfigurationError, SingularPointError
from tkz.rcalc import PuiseuxSeries, RElement, binom_fraction, compose_change, iota_expand

T = 2
N = 2


def _monomial(coeff, powers, dpows, t=T, n=N):
    out = RElement(t, n)
    out.terms[(tuple(powers), tuple(dpows))] = complex(coeff)
    return out


def random_point(rng):
    z = tuple(rng.uniform(0.4, 2.0) * np.exp(2j * np.pi * rng.uniform()) for _ in range(N))
    while abs(z[0] - z[1]) < 0.25:
        z = tuple(rng.uniform(0.4, 2.0) * np.exp(2j * np.pi * rng.uniform()) for _ in range(N))
    return z


# -- eval ---------------------------------------------------------------------


def test_eval_examples():
    f = RElement.var_power(0, Fraction(1, 2), 2, 1)
    assert abs(f.eval((4,), (0,)) - 2) < 1e-14
    assert abs(f.eval((4,), (1,)) + 2) < 1e-13
    g = RElement.diff_power(0, 1, -1, 1, 2)
    assert abs(g.eval((3, 1)) - 0.5) < 1e-14


def test_eval_singular_points():
    f = RElement.var_power(0, Fraction(1, 2), 2, 1)
    with pytest.raises(SingularPointError):
        f.eval((0,), (0,))
    g = RElement.diff_power(0, 1, -1, 1, 2)
    with pytest.raises(SingularPointError):
        g.eval((1, 1))
    # positive integer power at zero is fine
    h = RElement.var_power(0, 2, 1, 1)
    assert h.eval((0,)) == 0


def test_eval_ring_homomorphism(rng):
    for _ in range(50):
        f = _monomial(rng.normal() + 1j * rng.normal(), (rng.integers(-3, 4), rng.integers(-3, 4)), (rng.integers(-2, 3),))
        g = _monomial(rng.normal() + 1j * rng.normal(), (rng.integers(-3, 4), rng.integers(-3, 4)), (rng.integers(-2, 3),))
        f = f + _monomial(0.3, (1, 0), (0,))
        z = random_point(rng)
        p = tuple(rng.integers(-2, 3, size=N))
        fg = (f * g).eval(z, p)
        fg2 = f.eval(z, p) * g.eval(z, p)
        assert abs(fg - fg2) < 1e-10 * max(1.0, abs(fg))
        s1 = (f + g).eval(z, p)
        s2 = f.eval(z, p) + g.eval(z, p)
        assert abs(s1 - s2) < 1e-10 * max(1.0, abs(s1))


@given(
    num=st.integers(-6, 6),
    mag=st.floats(0.3, 2.5),
    angle=st.floats(0.0, 6.28),
    p=st.integers(-3, 3),
)
@settings(max_examples=60, deadline=None)
def test_branch_shift_law(num, mag, angle, p):
    f = RElement.var_power(0, Fraction(num, T), T, 1)
    z = (mag * cmath.exp(1j * angle),)
    lhs = f.eval(z, (p + 1,))
    rhs = cmath.exp(2j * cmath.pi * num / T) * f.eval(z, (p,))
    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))


# -- differentiate -------------------------------------------------------------


def test_differentiate_examples():
    d = RElement.var_power(0, Fraction(1, 2), 2, 1).differentiate(0)
    assert d.terms == {((-1,), ()): 0.5 + 0j}
    d2 = RElement.diff_power(0, 1, -1, 1, 2).differentiate(0)
    assert d2.terms == {((0, 0), (-2,)): -1.0 + 0j}
    h = RElement.var_power(1, Fraction(1, 2), 2, 2) * RElement.diff_power(0, 1, -1, 2, 2)
    dh = h.differentiate(1)
    eps = 1e-5
    fd = (h.eval((3, 1 + eps)) - h.eval((3, 1 - eps))) / (2 * eps)
    assert abs(dh.eval((3, 1)) - fd) < 1e-6 * max(1.0, abs(fd))


def test_differentiate_finite_difference_random(rng):
    for _ in range(20):
        f = _monomial(
            rng.normal() + 1j * rng.normal(),
            (rng.integers(-3, 4), rng.integers(-3, 4)),
            (rng.integers(-2, 3),),
        ) + _monomial(rng.normal(), (rng.integers(-2, 3), 0), (rng.integers(-1, 2),))
        i = int(rng.integers(0, N))
        z = random_point(rng)
        eps = 1e-5
        zp = list(z)
        zm = list(z)
        zp[i] += eps
        zm[i] -= eps
        fd = (f.eval(zp) - f.eval(zm)) / (2 * eps)
        sym = f.differentiate(i).eval(z)
        assert abs(sym - fd) < 1e-6 * max(1.0, abs(fd))


# -- iota expansion -------------------------------------------------------------


def test_iota_examples():
    s = iota_expand(RElement.diff_power(0, 1, -1, 1, 2), (10, 3))
    got = {k[0]: v for k, v in s.terms.items()}
    assert got == {
        (Fraction(-1), Fraction(0)): 1.0 + 0j,
        (Fraction(-2), Fraction(1)): 1.0 + 0j,
        (Fraction(-3), Fraction(2)): 1.0 + 0j,
    }
    s2 = iota_expand(RElement.var_power(0, Fraction(1, 2), 2, 2), (5, 5))
    assert {k[0] for k in s2.terms} == {(Fraction(1, 2), Fraction(0))}
    s3 = iota_expand(RElement.diff_power(0, 1, -2, 1, 2), (10, 2))
    got3 = {k[0]: v for k, v in s3.terms.items()}
    assert got3 == {
        (Fraction(-2), Fraction(0)): 1.0 + 0j,
        (Fraction(-3), Fraction(1)): 2.0 + 0j,
    }
    # numeric crosscheck at (2, 0.1)
    s4 = iota_expand(RElement.diff_power(0, 1, -2, 1, 2), (50, 40))
    assert abs(s4.eval((2, 0.1)) - (2 - 0.1) ** -2) < 1e-6


def test_iota_convergence_with_cutoff():
    f = RElement.diff_power(0, 1, -1, 1, 2)
    z = (1.0, 0.1)
    errs = []
    for cutoff in (5, 10, 30):
        s = iota_expand(f, (100, cutoff))
        errs.append(abs(s.eval(z) - 1.0 / (z[0] - z[1])))
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] < 1e-6


def test_iota_positive_power_is_exact():
    f = RElement.diff_power(0, 1, 2, 1, 2)
    s = iota_expand(f, (10, 10))
    z = (1.3 + 0.2j, 0.4 - 0.1j)
    assert abs(s.eval(z) - (z[0] - z[1]) ** 2) < 1e-12


# -- series bookkeeping ---------------------------------------------------------


def test_series_min_exponents():
    s = PuiseuxSeries.monomial(1.0, (Fraction(-2),), 1, (10,))
    assert tkz.series_min_exponents(s) == (Fraction(-2),)
    s2 = PuiseuxSeries.constant(1.0, 2, (5, 5)) + PuiseuxSeries.monomial(
        1.0, (Fraction(1), Fraction(1)), 2, (5, 5)
    )
    assert tkz.series_min_exponents(s2) == (Fraction(0), Fraction(0))
    s3 = PuiseuxSeries.monomial(1.0, (Fraction(1, 2), Fraction(-1, 2)), 2, (5, 5))
    assert tkz.series_min_exponents(s3) == (Fraction(1, 2), Fraction(-1, 2))
    empty = PuiseuxSeries.zero(2, (5, 5))
    assert tkz.series_min_exponents(empty) == (math.inf, math.inf)


def test_series_truncation_respected():
    a = PuiseuxSeries.monomial(1.0, (Fraction(3),), 1, (4,))
    b = PuiseuxSeries.monomial(1.0, (Fraction(2),), 1, (4,))
    assert (a * b).is_zero()
    assert not (a + b).is_zero()


# -- compose through changes -----------------------------------------------------


def test_compose_examples(rng):
    cov = tkz.ChangeOfVariables(A=np.eye(1), beta=np.zeros(1), delta=("0",), t=2)
    c1 = compose_change(RElement.var_power(0, -1, 2, 1), cov, 10)
    assert c1.terms == {((Fraction(-2),), (0,)): 1.0 + 0j}

    cov2 = tkz.ChangeOfVariables(
        A=np.array([[1.0, 0], [-1, 1]]), beta=np.zeros(2), delta=("0", "0"), t=1
    )
    c2 = compose_change(RElement.diff_power(0, 1, -1, 1, 2), cov2, 8)
    assert c2.terms == {((Fraction(-1), Fraction(0)), (0, 0)): 1.0 + 0j}

    cov3 = tkz.ChangeOfVariables(A=np.eye(1), beta=np.array([1.0]), delta=("0",), t=2)
    c3 = compose_change(RElement.var_power(0, Fraction(1, 2), 2, 1), cov3, 12)
    assert abs(c3.coefficient((0,)) - 1) < 1e-14
    assert abs(c3.coefficient((2,)) - 0.5) < 1e-14
    assert abs(c3.coefficient((4,)) + 0.125) < 1e-14
    assert abs(c3.eval((0.1,)) - math.sqrt(1.01)) < 1e-10


def test_compose_agrees_with_direct_eval(rng):
    # affine change with an interior regular target; positive-real leading
    # coefficients keep the default branch unambiguous
    cov = tkz.ChangeOfVariables(
        A=np.eye(2), beta=np.array([2.0, -1.0]), delta=("0", "0"), t=2
    )
    f = (
        RElement.var_power(0, Fraction(1, 2), 2, 2)
        * RElement.diff_power(0, 1, -1, 2, 2)
        + RElement.var_power(1, Fraction(-1, 2), 2, 2)
    )
    series = compose_change(f, cov, 16)
    for _ in range(5):
        eta = tuple(0.12 * (rng.uniform() + 1j * rng.uniform()) for _ in range(2))
        zeta = tuple(w**2 for w in eta)
        z = (zeta[0] + 2.0, zeta[1] - 1.0)
        direct = f.eval(z, (0, 0))
        viaseries = series.eval(eta, (0, 0))
        assert abs(direct - viaseries) < 1e-8 * max(1.0, abs(direct))


def test_compose_degenerate_configuration():
    # zeta1 = z1 - z2, zeta2 = z1 + z2 targeting (0, 0): z1 = (zeta1+zeta2)/2
    # vanishes inside every punctured polydisc, so z1^{-1} has no dominant term
    A = np.array([[1.0, 1.0], [-1.0, 1.0]])
    cov = tkz.ChangeOfVariables(A=A, beta=np.zeros(2), delta=("0", "0"), t=1)
    with pytest.raises(DegenerateConfigurationError):
        compose_change(RElement.var_power(0, -1, 1, 2), cov, 8)


def test_binom_fraction():
    assert binom_fraction(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binom_fraction(-1, 3) == -1
    assert binom_fraction(3, 2) == 3


# -- serialization ---------------------------------------------------------------


def test_relement_json_roundtrip(rng):
    f = _monomial(1.25 - 0.5j, (3, -1), (-2,)) + _monomial(0.5, (0, 1), (0,))
    g = RElement.from_json(f.to_json())
    assert g == f


def test_degrees():
    f = RElement.var_power(0, Fraction(1, 2), 2, 2) * RElement.var_power(
        1, Fraction(-1, 2), 2, 2
    ) * RElement.diff_power(0, 1, -1, 2, 2)
    assert f.degrees() == {Fraction(-1)}


def test_mixed_ring_rejected():
    f = RElement.var_power(0, 1, 2, 1)
    g = RElement.var_power(0, 1, 3, 1)
    with pytest.raises(ConfigurationError):
        _ = f + g


@given(
    n1=st.integers(-3, 3), n2=st.integers(-3, 3), m1=st.integers(-2, 2),
    k1=st.integers(-3, 3), k2=st.integers(-3, 3), m2=st.integers(-2, 2),
    c1=st.complex_numbers(min_magnitude=0.1, max_magnitude=2, allow_nan=False, allow_infinity=False),
    c2=st.complex_numbers(min_magnitude=0.1, max_magnitude=2, allow_nan=False, allow_infinity=False),
)
@settings(max_examples=60, deadline=None)
def test_differentiate_product_rule(n1, n2, m1, k1, k2, m2, c1, c2):
    """d(f g) = df g + f dg as an exact identity of ring elements."""
    f = _monomial(c1, (n1, n2), (m1,)) + _monomial(0.5, (1, 0), (0,))
    g = _monomial(c2, (k1, k2), (m2,))
    for i in range(N):
        lhs = (f * g).differentiate(i)
        rhs = f.differentiate(i) * g + f * g.differentiate(i)
        assert lhs.equals(rhs, tol=1e-12 * (1 + abs(c1) * abs(c2)))
