"""Eventually periodic radix expansions in base A with digits along v.

An expansion ``a_{-k} ... a_0 . c_1 ... c_m (p_1 ... p_T)^inf`` stands for

    sum_j a_{-j} A^j v + sum_i c_i A^{-i} v + A^{-m} (I - A^{-T})^{-1} sum_j p_j A^{-j} v

and is evaluated exactly in the (gamma, delta) plane of gamma*v + delta*Av.

Text form: ``INT.(PRE)[PERIOD]`` where each group is a comma separated list of
integers or ``num/den`` rationals, e.g. ``0.(-2,-3)[3,-3,0]`` or ``2,2,3.[3,-3,0]``.
Either group may be omitted.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import LatticePoint, Mat2, QuadraticPoly, as_rational, companion


def _digits(xs) -> tuple[Fraction, ...]:
    return tuple(as_rational(x) for x in xs)


@dataclass(frozen=True)
class RadixExpansion:
    int_digits: tuple[Fraction, ...] = ()
    preperiod: tuple[Fraction, ...] = ()
    period: tuple[Fraction, ...] = ()

    def __post_init__(self):
        ints = list(_digits(self.int_digits))
        while ints and ints[0] == 0:
            ints.pop(0)
        object.__setattr__(self, "int_digits", tuple(ints))
        object.__setattr__(self, "preperiod", _digits(self.preperiod))
        object.__setattr__(self, "period", _digits(self.period))

    @property
    def fractional_digits(self) -> tuple[Fraction, ...]:
        return self.preperiod + self.period

    def digit(self, i: int) -> Fraction:
        """The i-th fractional digit (1-based), unrolling the period."""
        if i <= len(self.preperiod):
            return self.preperiod[i - 1]
        if not self.period:
            return Fraction(0)
        return self.period[(i - len(self.preperiod) - 1) % len(self.period)]

    def __str__(self) -> str:
        return format_expansion(self)


def _fmt(xs: Iterable[Fraction]) -> str:
    return ",".join(str(x) for x in xs)


def format_expansion(exp: RadixExpansion) -> str:
    head = _fmt(exp.int_digits) if exp.int_digits else "0"
    out = head + "."
    if exp.preperiod:
        out += f"({_fmt(exp.preperiod)})"
    if exp.period:
        out += f"[{_fmt(exp.period)}]"
    return out


_GRAMMAR = re.compile(
    r"^\s*(?P<int>[^.()\[\]]*)\.\s*(?:\((?P<pre>[^()]*)\))?\s*(?:\[(?P<per>[^\[\]]*)\])?\s*$"
)


def _parse_list(s: str | None) -> tuple[Fraction, ...]:
    if s is None or not s.strip():
        return ()
    return tuple(as_rational(tok) for tok in s.split(","))


def parse_expansion(text: str) -> RadixExpansion:
    m = _GRAMMAR.match(text)
    if not m:
        raise ValueError(f"malformed expansion {text!r}; expected e.g. '0.(3)[3,0]'")
    return RadixExpansion(_parse_list(m["int"]), _parse_list(m["pre"]), _parse_list(m["per"]))


def _finite_tail(digits: Sequence[Fraction], Ainv: Mat2, start=(Fraction(0), Fraction(0))):
    """Horner from the least significant digit: x <- A^{-1}(x + d v)."""
    x = start
    for d in reversed(digits):
        x = Ainv @ (x[0] + d, x[1])
    return x


def eval_expansion(exp: RadixExpansion, poly: QuadraticPoly) -> LatticePoint:
    A = companion(poly)
    Ainv = A.inverse()
    g, h = Fraction(0), Fraction(0)
    for d in exp.int_digits:
        g, h = A @ (g, h)
        g += d
    tail = (Fraction(0), Fraction(0))
    if exp.period:
        s = _finite_tail(exp.period, Ainv)
        T = len(exp.period)
        tail = (Mat2.identity() - Ainv**T).inverse() @ s
    tail = _finite_tail(exp.preperiod, Ainv, tail)
    return LatticePoint(g + tail[0], h + tail[1])


# the public name mirrors the operation; ``eval_expansion`` avoids shadowing the builtin
eval = eval_expansion  # noqa: A001


def verify(exp: RadixExpansion, target: LatticePoint, poly: QuadraticPoly,
           alphabet: Iterable | None = None) -> bool:
    """Exact equality with ``target``; if ``alphabet`` is given every fractional
    digit must also belong to it."""
    if alphabet is not None:
        allowed = set(_digits(alphabet))
        if any(d not in allowed for d in exp.fractional_digits):
            return False
    return eval_expansion(exp, poly) == LatticePoint(*target)


def _certificate_hypotheses(poly: QuadraticPoly, variant: str) -> tuple[int, int]:
    p = poly.p
    if variant == "plus_q":
        q = poly.q
        if q < 2 or not 2 * p > q + 2:
            raise ValueError(f"need q >= 2 and 2p > q + 2 for {poly}")
    elif variant == "minus_q":
        q = -poly.q
        if q < 2 or not 2 * p > q - 2:
            raise ValueError(f"need f(0) = -q with q >= 2 and 2p > q - 2 for {poly}")
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return p, q


def thm5_certificates(poly: QuadraticPoly, variant: str) -> list[tuple[str, RadixExpansion, LatticePoint]]:
    """Symbolic certificates for v and 2v when |p| is large relative to q.

    ``plus_q`` covers f = x^2 + p x + q (from f(A)(A - I) = 0 and
    A + (p-1)I = -(q-p+1)(A+I)^{-1}); ``minus_q`` covers f = x^2 + p x - q.
    Returns ``(label, expansion, target)`` triples: two expansions of v and
    their digit-wise sum, an expansion of 2v.
    """
    p, q = _certificate_hypotheses(poly, variant)
    one, two = LatticePoint(1, 0), LatticePoint(2, 0)
    if variant == "plus_q":
        first = RadixExpansion(period=(1 - p, p - q, q - 1))
        second = RadixExpansion(preperiod=(1 - p,), period=(-(q - p + 1), q - p + 1))
        total = RadixExpansion(
            preperiod=(2 - 2 * p,),
            period=(2 * p - 2 * q - 1, 2 * q - p, -q, 1, p - 2, q - 2 * p + 2),
        )
        small = (2 * p - 2 * q - 1, 1, p - 2, q - 2 * p + 2)
        assert all(abs(x) <= q - 1 for x in small), (p, q)
        labels = ("1v: f(A)(A-I)=0", "1v: A+(p-1)I=-(q-p+1)(A+I)^-1", "2v: sum")
    else:
        first = RadixExpansion(period=(-p, q - 1))
        second = RadixExpansion(preperiod=(-(p + 1),), period=(q - p - 1,))
        total = RadixExpansion(preperiod=(-2 * p - 1,), period=(2 * q - p - 2, q - 2 * p - 1))
        assert abs(q - 2 * p - 1) <= q - 1, (p, q)
        labels = ("1v: f(A)=0", "1v: A+(p-1)I=-(q-p-1)(A-I)^-1", "2v: sum")
    return list(zip(labels, (first, second, total), (one, one, two)))
