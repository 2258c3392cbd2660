"""Exact arithmetic in the cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) with rational
coefficients.  Elements of different fields combine by lifting both to
Q(zeta_lcm).
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _poly_divmod_monic(num, den):
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = num[-1]
        if c:
            q[shift] = c
            for i, d in enumerate(den):
                num[shift + i] -= c * d
        num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_monic(poly, cyclotomic_polynomial(d))
            assert not any(rem)
    while poly and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


@lru_cache(maxsize=None)
def _degree(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


def _reduce(coeffs, n):
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for top in range(len(c) - 1, deg - 1, -1):
        a = c[top]
        if a:
            shift = top - deg
            for i in range(deg):
                c[shift + i] -= a * phi[i]
        c[top] = 0
    c = c[:deg] + [0] * (deg - len(c))
    return tuple(Fraction(x) if not isinstance(x, Fraction) else x for x in c)


class Cyc:
    """An element of Q(zeta_n)."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs=()):
        self.n = n
        self.c = _reduce(coeffs, n)

    @classmethod
    def _raw(cls, n, c):
        obj = cls.__new__(cls)
        obj.n = n
        obj.c = c
        return obj

    @classmethod
    def rational(cls, q) -> "Cyc":
        return cls._raw(1, (Fraction(q),))

    @classmethod
    def root_of_unity(cls, n: int, k: int = 1) -> "Cyc":
        """zeta_n ** k."""
        k %= n
        return cls(n, [0] * k + [1])

    # -- coercion -------------------------------------------------------
    def lift(self, m: int) -> "Cyc":
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError(f"Q(zeta_{self.n}) does not embed in Q(zeta_{m})")
        step = m // self.n
        coeffs = [0] * (step * len(self.c) + 1)
        for i, a in enumerate(self.c):
            coeffs[i * step] = a
        return Cyc(m, coeffs)

    @staticmethod
    def _coerce(x) -> "Cyc":
        if isinstance(x, Cyc):
            return x
        if isinstance(x, (int, Rational)):
            return Cyc._raw(1, (Fraction(x),))
        return NotImplemented

    def _common(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented, NotImplemented
        if other.n == self.n:
            return self, other
        if other.n == 1:
            return self, other.lift(self.n)
        if self.n == 1:
            return self.lift(other.n), other
        m = _lcm(self.n, other.n)
        return self.lift(m), other.lift(m)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return Cyc._raw(a.n, tuple(x + y for x, y in zip(a.c, b.c)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc._raw(self.n, tuple(-x for x in self.c))

    def __sub__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return Cyc._raw(a.n, tuple(x - y for x, y in zip(a.c, b.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        if b.n == 1 or len(b.c) == 1:
            s = b.c[0]
            return Cyc._raw(a.n, tuple(x * s for x in a.c))
        prod = [0] * (len(a.c) + len(b.c) - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        prod[i + j] += x * y
        return Cyc(a.n, prod)

    __rmul__ = __mul__

    def inverse(self) -> "Cyc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if len(self.c) == 1:
            return Cyc._raw(self.n, (1 / self.c[0],))
        # extended Euclid in Q[x]: s*a + t*Phi = 1
        a = _strip([Fraction(x) for x in self.c])
        b = [Fraction(x) for x in cyclotomic_polynomial(self.n)]
        s0, s1 = [Fraction(1)], [Fraction(0)]
        r0, r1 = a, b
        while any(r1):
            q, r = _poly_divmod_field(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _strip(_poly_sub(s0, _poly_mul(q, s1)))
        lead = r0[0]
        assert len(_strip(r0)) == 1
        return Cyc(self.n, [x / lead for x in s0])

    def __truediv__(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyc._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyc._raw(1, (Fraction(1),))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -----------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.c)

    def __eq__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return a.c == b.c

    def __hash__(self):
        s = self.simplify()
        return hash((s.n, s.c))

    def __bool__(self):
        return not self.is_zero()

    def simplify(self) -> "Cyc":
        """Same element, in the smallest Q(zeta_d) among divisors d of n that contains it."""
        if self.n == 1:
            return self
        for d in _divisors(self.n):
            if d == self.n:
                break
            # only worth trying when the element could lie in Q(zeta_d)
            cand = self._descend(d)
            if cand is not None:
                return cand
        return self

    def _descend(self, d):
        from .linalg import solve_rational

        deg = _degree(d)
        images = [Cyc.root_of_unity(d, i).lift(self.n).c for i in range(deg)]
        cols = [list(col) for col in zip(*images)]
        sol = solve_rational(cols, list(self.c))
        if sol is None:
            return None
        return Cyc(d, sol)

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.c[1:]) or self.simplify().n == 1

    def to_fraction(self) -> Fraction:
        s = self.simplify()
        if s.n != 1:
            raise ValueError(f"{self!r} is not rational")
        return s.c[0]

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.n)
        return sum(float(a) * z**i for i, a in enumerate(self.c))

    def __repr__(self):
        s = self.simplify()
        if s.n == 1:
            return f"Cyc({s.c[0]})"
        terms = []
        for i, a in enumerate(s.c):
            if a:
                terms.append(f"{a}" if i == 0 else f"{a}*z{s.n}^{i}")
        return "Cyc(" + (" + ".join(terms) or "0") + ")"


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _strip(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_divmod_field(num, den):
    num = _strip(num)
    den = _strip(den)
    if len(num) < len(den):
        return [Fraction(0)], num
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    num = list(num)
    lead = den[-1]
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = num[-1] / lead
        q[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        num.pop()
    return q, _strip(num) if num else [Fraction(0)]


ZERO = Cyc.rational(0)
ONE = Cyc.rational(1)


def as_cyc(x) -> Cyc:
    out = Cyc._coerce(x)
    if out is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a cyclotomic number")
    return out
