"""Canned instances with the published verdicts, shared by the CLI
``reproduce`` command, the acceptance tests and the scripts."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F

from .algebra import LatticePoint, QuadraticPoly, eligible_polys
from .connectivity import (
    BoundVerdict,
    CertificateVerdict,
    Verdict,
    check_thm4_bound,
    check_thm5,
    decide,
)
from .neighbors import DigitSystem
from .radix import parse_expansion, thm5_certificates, verify

C, D = Verdict.CONNECTED, Verdict.DISCONNECTED


@dataclass
class Row:
    label: str
    expected: str
    got: str
    seconds: float = 0.0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.expected == self.got


def integer_m_expected(poly: QuadraticPoly, m: int) -> Verdict:
    """D = {0, 1, m}, |q| = 3: connected for m = 2, never for m >= 4; at m = 3
    only x^2 +/- 3 and x^2 +/- x + 3 are disconnected."""
    if m == 2:
        return C
    if m >= 4:
        return D
    if poly.p == 0 or (abs(poly.p) == 1 and poly.q == 3):
        return D
    return C


def integer_m_instances():
    for poly in eligible_polys(3):
        for m in range(2, 7):
            yield poly, m, integer_m_expected(poly, m)


# family -> (upper-region samples, lower-region samples); all disconnected
BOUND_SAMPLES = {
    (1, 3): ((F(67, 25), F(3), F(4)), (F(67, 42), F(3, 2), F(5, 4))),
    (2, 3): ((F(37, 10), F(4), F(5)), (F(37, 27), F(4, 3), F(6, 5))),
    (3, 3): ((F(33, 10), F(7, 2), F(4)), (F(33, 23), F(7, 5), F(5, 4))),
    (1, -3): ((F(4), F(39, 10), F(9, 2)), (F(13, 10), F(5, 4), F(6, 5))),
}

PROBE_POLY = QuadraticPoly(-1, -3)
PROBE_SAMPLES = {F(13, 10): D, F(8, 5): C, F(2): C, F(5, 2): C, F(8, 3): C, F(9, 2): D}

LARGE_Q_EXAMPLES = [
    (QuadraticPoly(5, 6), (0, 1, 2, 4, 6, 8), CertificateVerdict.CONNECTED_PLUS_Q),
    (QuadraticPoly(4, -6), (0, 1, 3, 5, 7, 9), CertificateVerdict.CONNECTED_MINUS_Q),
]

# (p, q, expansion, target); the integer-part ones are identities between two
# expansions rather than statements about 2v
TWO_V_IDENTITIES = [
    (-1, -3, "0.(3)[3,0]", (2, 0)),
    (2, 3, "0.(-2,-3)[3,-3,0]", (2, 0)),
    (3, 3, "0.(-3,0)[3,-3]", (2, 0)),
    (-1, -3, "0.(1,3)", (1, 0)),
    (2, 3, "0.(-2,-3)", (1, 0)),
    (3, 3, "0.(-3,-3)", (1, 0)),
]
INTEGER_PART_IDENTITIES = [
    (2, 3, "2,2,3.", "0.[3,-3,0]"),
    (3, 3, "2,3,0.", "0.[3,-3]"),
]


def _timed(fn):
    import time

    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def reproduce_integer_m(**kw) -> list[Row]:
    rows = []
    for poly, m, exp in integer_m_instances():
        rep, dt = _timed(lambda: decide(DigitSystem(poly, (0, 1, m)), **kw))
        rows.append(Row(f"{poly}, D={{0,1,{m}}}", exp.value, rep.verdict.value, dt))
    return rows


def reproduce_bound_regions(**kw) -> list[Row]:
    rows = []
    for (p, q), (upper, lower) in BOUND_SAMPLES.items():
        for sign in (1, -1):
            poly = QuadraticPoly(sign * p, q)
            for b in upper + lower:
                bound = check_thm4_bound(poly, b)
                rep, dt = _timed(lambda: decide(DigitSystem(poly, (0, 1, b)), **kw))
                got = rep.verdict.value
                if bound is not BoundVerdict.DISCONNECTED_BY_BOUND:
                    got += f" (bound table: {bound.value})"
                rows.append(Row(f"{poly}, b={b}", D.value, got, dt))
    return rows


def reproduce_probe_points(**kw) -> list[Row]:
    rows = []
    for b, exp in PROBE_SAMPLES.items():
        rep, dt = _timed(lambda: decide(DigitSystem(PROBE_POLY, (0, 1, b)), **kw))
        rows.append(Row(f"{PROBE_POLY}, b={b}", exp.value, rep.verdict.value, dt))
    return rows


def reproduce_large_q(**kw) -> list[Row]:
    rows = []
    for poly, digits, exp in LARGE_Q_EXAMPLES:
        rep, dt = _timed(lambda: decide(DigitSystem(poly, digits), **kw))
        rows.append(Row(f"{poly}, D={set(digits)}", C.value, rep.verdict.value, dt,
                        f"{rep.states} states"))
        res = check_thm5(poly, digits)
        rows.append(Row(f"{poly}: certificate check", exp.value, res.verdict.value,
                        detail="; ".join(res.failed)))
        diffs = DigitSystem(poly, digits).differences
        for label, e, target in thm5_certificates(poly, "plus_q" if poly.q > 0 else "minus_q"):
            ok = verify(e, target, poly, diffs)
            rows.append(Row(f"{poly}: {target.gamma}v = {e}  [{label}]", "true", str(ok).lower()))
    return rows


def reproduce_radix(**kw) -> list[Row]:
    rows = []
    for p, q, text, target in TWO_V_IDENTITIES:
        poly = QuadraticPoly(p, q)
        ok = verify(parse_expansion(text), LatticePoint(*target), poly)
        rows.append(Row(f"{poly}: {target[0]}v = {text}", "true", str(ok).lower()))
    from .radix import eval_expansion

    for p, q, lhs, rhs in INTEGER_PART_IDENTITIES:
        poly = QuadraticPoly(p, q)
        ok = eval_expansion(parse_expansion(lhs), poly) == eval_expansion(parse_expansion(rhs), poly)
        rows.append(Row(f"{poly}: {lhs} = {rhs}", "true", str(ok).lower()))
    return rows


TABLES = {
    "thm1_3": reproduce_integer_m,
    "thm1_4": reproduce_bound_regions,
    "prop1_2": reproduce_probe_points,
    "sec5": reproduce_large_q,
    "sec3_radix": reproduce_radix,
}
