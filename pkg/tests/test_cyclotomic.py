import cmath
from fractions import Fraction

from hypothesis import given, strategies as st

from weylkit.cyclotomic import Cyc, as_cyc, cyclotomic_polynomial

ORDERS = st.sampled_from([1, 2, 3, 4, 5, 6, 8, 12])


@st.composite
def cyc(draw):
    n = draw(ORDERS)
    coeffs = draw(st.lists(st.integers(-5, 5), min_size=1, max_size=n))
    return Cyc(n, coeffs)


def approx(a, b, tol=1e-9):
    return abs(a - b) < tol


def test_cyclotomic_polynomials():
    # coefficients low degree first
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_roots_of_unity():
    for n in (2, 3, 4, 5, 6, 8, 12):
        z = Cyc.root_of_unity(n)
        assert z ** n == as_cyc(1)
        total = sum((Cyc.root_of_unity(n, k) for k in range(n)), as_cyc(0))
        assert total.is_zero()
        assert approx(z.to_complex(), cmath.exp(2j * cmath.pi / n))


def test_zeta4_squared_is_minus_one():
    i = Cyc.root_of_unity(4)
    assert i * i == as_cyc(-1)
    assert (i * i).simplify().n == 1


@given(cyc(), cyc())
def test_arithmetic_matches_complex(a, b):
    assert approx((a + b).to_complex(), a.to_complex() + b.to_complex())
    assert approx((a * b).to_complex(), a.to_complex() * b.to_complex())
    assert approx((a - b).to_complex(), a.to_complex() - b.to_complex())


@given(cyc())
def test_inverse_and_simplify(a):
    s = a.simplify()
    assert s == a
    assert approx(s.to_complex(), a.to_complex())
    if not a.is_zero():
        assert a * a.inverse() == as_cyc(1)


def test_rational_roundtrip():
    q = Cyc.rational(Fraction(3, 7))
    assert q.is_rational() and q.to_fraction() == Fraction(3, 7)
    assert Cyc(3, [1, 1, 1]).is_zero()
