"""Exact arithmetic in the cyclotomic field Q(zeta_m).

Elements are coordinate tuples in the power basis ``1, zeta, ..., zeta^(d-1)``
with ``d = phi(m)``, reduced modulo the m-th cyclotomic polynomial, so two
elements are equal exactly when their tuples are. Coordinates are ints for
algebraic integers and may be Fractions otherwise.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache


def _poly_divexact(num, den):
    """Exact division of integer polynomials (coefficients low -> high)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(num[i + len(den) - 1], lead)
        assert r == 0
        out[i] = q
        for j, c in enumerate(den):
            num[i + j] -= q * c
    assert not any(num[: len(den) - 1])
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m) -> tuple:
    """Coefficients of Phi_m, lowest degree first."""
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


class CyclotomicField:
    def __init__(self, m):
        if m < 1:
            raise ValueError("order must be positive")
        self.m = m
        self.poly = cyclotomic_polynomial(m)
        self.degree = len(self.poly) - 1
        d = self.degree
        # x^k reduced, for k < 2d - 1 (products) and k < m (zeta powers)
        red = []
        cur = [1] + [0] * (d - 1)
        for _ in range(max(2 * d - 1, m)):
            red.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [c - top * p for c, p in zip(cur, self.poly[:-1])]
        self._xpow = red

    def __repr__(self):
        return f"CyclotomicField({self.m})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.m == self.m

    def __hash__(self):
        return hash(("cyclotomic", self.m))

    # constructors
    def zero(self):
        return (0,) * self.degree

    def one(self):
        return self.from_rational(1)

    def from_rational(self, a):
        return (a,) + (0,) * (self.degree - 1)

    def zeta(self, j):
        return self._xpow[j % self.m]

    def from_exponents(self, mults):
        """``sum_j mults[j] * zeta^j``."""
        out = [0] * self.degree
        for j, c in enumerate(mults):
            if c:
                for i, z in enumerate(self.zeta(j)):
                    if z:
                        out[i] += c * z
        return tuple(out)

    # arithmetic
    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def scale(self, a, q):
        return tuple(q * x for x in a)

    def mul(self, a, b):
        d = self.degree
        conv = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = list(conv[:d])
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                for i, z in enumerate(self._xpow[k]):
                    if z:
                        out[i] += c * z
        return tuple(out)

    def conj(self, a):
        """Complex conjugation, ``zeta -> zeta^-1``."""
        out = [0] * self.degree
        for j, c in enumerate(a):
            if c:
                for i, z in enumerate(self.zeta(-j)):
                    if z:
                        out[i] += c * z
        return tuple(out)

    def is_zero(self, a):
        return not any(a)

    def is_rational(self, a):
        return not any(a[1:])

    def rational(self, a):
        if not self.is_rational(a):
            raise ValueError("not a rational element")
        return a[0]

    def mult_matrix(self, a):
        """Matrix (rows indexed by output coordinate) of ``x -> a*x``."""
        cols = [self.mul(a, self._xpow[i]) for i in range(self.degree)]
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]

    def inverse(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        from tbf.intlinalg import inverse_rational

        inv = inverse_rational(self.mult_matrix(a))
        return tuple(_normalize(row[0]) for row in inv)

    def div(self, a, b):
        return self.mul(a, self.inverse(b))

    def to_complex(self, a) -> complex:
        w = cmath.exp(2j * cmath.pi / self.m)
        return sum(complex(c) * w**i for i, c in enumerate(a))

    def coerce(self, value):
        """Accept an int, a ``"p/q"`` string, a Fraction, or a coordinate list."""
        if isinstance(value, (list, tuple)):
            if len(value) != self.degree:
                raise ValueError(f"expected {self.degree} coordinates, got {len(value)}")
            return tuple(_normalize(Fraction(v)) for v in value)
        return self.from_rational(_normalize(Fraction(value)))


def _normalize(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else q
