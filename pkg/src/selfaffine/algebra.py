"""Exact scalars, 2x2 rational matrices and quadratic characteristic polynomials.

Scalars are :class:`fractions.Fraction`; nothing in here touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings. Floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass an int, Fraction or 'num/den'")
    if isinstance(x, str):
        s = x.strip()
        if any(c in s for c in ".eE"):
            raise ValueError(f"decimal notation not accepted: {x!r}")
        return Fraction(s)
    return Fraction(x)


@dataclass(frozen=True)
class Mat2:
    """Row-major 2x2 matrix over the rationals."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def __iter__(self) -> Iterator[Fraction]:
        return iter((self.a, self.b, self.c, self.d))

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> Fraction:
        return self.a + self.d

    def inverse(self) -> "Mat2":
        det = self.det
        if det == 0:
            raise ZeroDivisionError("singular matrix")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __matmul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        x, y = other
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def scale(self, s) -> "Mat2":
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Mat2.identity(), self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def norm1(self) -> Fraction:
        """Induced 1-norm (max absolute column sum)."""
        return max(abs(self.a) + abs(self.c), abs(self.b) + abs(self.d))

    def charpoly(self) -> tuple[Fraction, Fraction]:
        """(p, q) with det(xI - M) = x^2 + p x + q."""
        return -self.trace, self.det


def is_expanding(p: int, q: int) -> bool:
    """True iff both roots of x^2 + p x + q lie strictly outside the unit circle.

    Schur-Cohn on the reciprocal polynomial x^2 + (p/q) x + 1/q: its roots are
    the reciprocals, and a real monic quadratic x^2 + a1 x + a0 has both roots
    in the open unit disc iff |a0| < 1 and |a1| < 1 + a0.
    """
    if q == 0:
        return False
    a0 = Fraction(1, 1) / q
    a1 = Fraction(p) / q
    return abs(a0) < 1 and abs(a1) < 1 + a0


@dataclass(frozen=True)
class QuadraticPoly:
    """f(x) = x^2 + p x + q, validated as expanding on construction."""

    p: int
    q: int

    def __post_init__(self):
        if int(self.p) != self.p or int(self.q) != self.q:
            raise ValueError("coefficients must be integers")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "q", int(self.q))
        if abs(self.q) < 2:
            raise ValueError(f"|q| must be at least 2, got q={self.q}")
        if not is_expanding(self.p, self.q):
            raise ValueError(f"x^2 + {self.p}x + {self.q} is not expanding")

    def __str__(self) -> str:
        def term(c, s):
            if c == 0:
                return ""
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            return f" {sign} {'' if mag == 1 and s else mag}{s}"

        return "x^2" + term(self.p, "x") + term(self.q, "")

    def __call__(self, x):
        return x * x + self.p * x + self.q


def companion(poly: QuadraticPoly) -> Mat2:
    """Companion matrix [[0, -q], [1, -p]]; acts on (gamma, delta) coordinates
    of gamma*v + delta*Av."""
    return Mat2(0, -poly.q, 1, -poly.p)


def discriminant(poly: QuadraticPoly) -> int:
    return poly.p * poly.p - 4 * poly.q


def normalize_sign(poly: QuadraticPoly) -> tuple[QuadraticPoly, bool]:
    """Replace p by |p|; connectedness is unchanged under x -> -x."""
    if poly.p < 0:
        return QuadraticPoly(-poly.p, poly.q), True
    return poly, False


def eligible_polys(det: int = 3) -> list[QuadraticPoly]:
    """All expanding x^2 + p x + q with |q| = det, ordered by (q sign, |p|, p)."""
    out = []
    for q in (det, -det):
        bound = abs(q) + 2
        for p in sorted(range(-bound, bound + 1), key=lambda p: (abs(p), p)):
            if is_expanding(p, q):
                out.append(QuadraticPoly(p, q))
    return out


@dataclass(frozen=True, order=True)
class LatticePoint:
    """The point gamma*v + delta*Av, stored by its two exact coordinates."""

    gamma: Fraction
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_rational(self.gamma))
        object.__setattr__(self, "delta", as_rational(self.delta))

    def __iter__(self):
        return iter((self.gamma, self.delta))

    def __add__(self, other: "LatticePoint") -> "LatticePoint":
        return LatticePoint(self.gamma + other.gamma, self.delta + other.delta)

    def __sub__(self, other: "LatticePoint") -> "LatticePoint":
        return LatticePoint(self.gamma - other.gamma, self.delta - other.delta)

    def __neg__(self) -> "LatticePoint":
        return LatticePoint(-self.gamma, -self.delta)

    def __str__(self) -> str:
        return f"({self.gamma}, {self.delta})"
