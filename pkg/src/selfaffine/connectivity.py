"""Connectedness of T(A, D) through the edge graph on digits.

Digits d_i, d_j are joined when (T + d_i v) and (T + d_j v) meet, i.e. when
(d_i - d_j) v lies in T - T; T is connected iff that graph is. Membership is
decided by the neighbor automaton; the closed-form results for x^2 +/- q, the
disconnection bounds for |q| = 3 and the large-|p| certificates are kept as
independent cross-checks.
"""
from __future__ import annotations

import enum
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from scipy.cluster.hierarchy import DisjointSet

from .algebra import LatticePoint, QuadraticPoly, as_rational, normalize_sign
from .coords import DEFAULT_TERMS, TailBounds
from .neighbors import (
    DEFAULT_STATE_LIMIT,
    DigitSystem,
    Membership,
    StateLimitExceeded,
    build_automaton,
)
from .radix import RadixExpansion, thm5_certificates, verify

log = logging.getLogger(__name__)


class Verdict(str, enum.Enum):
    CONNECTED = "connected"
    DISCONNECTED = "disconnected"

    def __str__(self):
        return self.value


class BoundVerdict(str, enum.Enum):
    DISCONNECTED_BY_BOUND = "disconnected-by-bound"
    INCONCLUSIVE = "inconclusive"
    NOT_APPLICABLE = "not-applicable"

    def __str__(self):
        return self.value


class CertificateVerdict(str, enum.Enum):
    CONNECTED_PLUS_Q = "connected-by-plus-q-certificate"
    CONNECTED_MINUS_Q = "connected-by-minus-q-certificate"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EGraph:
    vertices: tuple[Fraction, ...]
    edges: frozenset  # of (d_i, d_j) with d_i < d_j

    def is_connected(self) -> bool:
        ds = DisjointSet(self.vertices)
        for a, b in self.edges:
            ds.merge(a, b)
        return ds.n_subsets <= 1

    def components(self) -> list[list[Fraction]]:
        ds = DisjointSet(self.vertices)
        for a, b in self.edges:
            ds.merge(a, b)
        return sorted(sorted(c) for c in ds.subsets())


@dataclass
class ConnectivityReport:
    system: DigitSystem
    verdict: Verdict
    e_graph: EGraph
    is_tile: bool | None
    certificates: dict = field(default_factory=dict)  # (d_i, d_j) -> Membership
    bounds: TailBounds | None = None
    states: int = 0
    alive: int = 0
    seconds: float = 0.0
    route: str = "automaton"

    @property
    def connected(self) -> bool:
        return self.verdict is Verdict.CONNECTED


def decide(system: DigitSystem, *, terms: int = DEFAULT_TERMS,
           state_limit: int = DEFAULT_STATE_LIMIT) -> ConnectivityReport:
    """Build the edge graph with one membership query per digit pair."""
    t0 = time.perf_counter()
    auto = build_automaton(system, terms=terms, state_limit=state_limit)
    certificates = {}
    edges = set()
    for a, b in combinations(system.digits, 2):
        m = auto.query(LatticePoint(b - a, 0))
        certificates[(a, b)] = m
        if m.member:
            edges.add((a, b))
    graph = EGraph(system.digits, frozenset(edges))
    verdict = Verdict.CONNECTED if graph.is_connected() else Verdict.DISCONNECTED
    return ConnectivityReport(
        system=system,
        verdict=verdict,
        e_graph=graph,
        is_tile=is_tile_candidate(system),
        certificates=certificates,
        bounds=auto.bounds,
        states=auto.states,
        alive=len(auto.alive),
        seconds=time.perf_counter() - t0,
    )


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


def is_tile_candidate(system: DigitSystem) -> bool | None:
    """For prime |q| and integer digits: do the digits form a complete residue
    system mod |q|? None when the test does not apply."""
    q = abs(system.poly.q)
    if not _is_prime(q) or any(d.denominator != 1 for d in system.digits):
        return None
    return len(system.digits) == q and len({int(d) % q for d in system.digits}) == q


def decide_xn_pm_q(digit_coeffs: Sequence, q: int | None = None) -> Verdict:
    """Closed form for f = x^2 +/- q: connected iff the digits are, up to
    translation, an arithmetic progression {0, a, ..., (k-1) a} with a > 0.

    With ``q`` given the progression must also have exactly |q| terms.
    """
    ds = sorted(as_rational(d) for d in digit_coeffs)
    ds = [d - ds[0] for d in ds]
    if q is not None and len(ds) != abs(q):
        return Verdict.DISCONNECTED
    if len(ds) < 2:
        return Verdict.CONNECTED
    a = ds[1]
    ok = a > 0 and all(d == k * a for k, d in enumerate(ds))
    return Verdict.CONNECTED if ok else Verdict.DISCONNECTED


# upper threshold, lower threshold, and whether the inequalities are strict
BOUND_REGIONS = {
    (1, 3): (Fraction(67, 25), Fraction(67, 42), False),
    (2, 3): (Fraction(37, 10), Fraction(37, 27), False),
    (3, 3): (Fraction(33, 10), Fraction(33, 23), False),
    (1, -3): (Fraction(19, 5), Fraction(19, 14), True),
}


def check_thm4_bound(poly: QuadraticPoly, b) -> BoundVerdict:
    """Table lookup of the known disconnection regions for D = {0, 1, b}, |q| = 3."""
    b = as_rational(b)
    key = (abs(poly.p), poly.q)
    if key not in BOUND_REGIONS or b <= 1:
        return BoundVerdict.NOT_APPLICABLE
    hi, lo, strict = BOUND_REGIONS[key]
    hit = (b > hi or b < lo) if strict else (b >= hi or b <= lo)
    return BoundVerdict.DISCONNECTED_BY_BOUND if hit else BoundVerdict.INCONCLUSIVE


@dataclass
class CertificateCheck:
    verdict: CertificateVerdict
    failed: list[str] = field(default_factory=list)
    certificates: list[tuple[str, RadixExpansion, LatticePoint]] = field(default_factory=list)


def check_thm5(poly: QuadraticPoly, digit_coeffs: Sequence) -> CertificateCheck:
    """Check the large-|p| sufficient conditions for digits with gaps 1 and 2.

    On success the returned certificates expand v and 2v over D - D, and each
    has been verified exactly.
    """
    failed = []
    ds = [as_rational(d) for d in digit_coeffs]
    if any(d.denominator != 1 for d in ds):
        failed.append("digits must be integers")
    if ds != sorted(set(ds)) or not ds or ds[0] != 0:
        failed.append("digits must be strictly increasing and start at 0")
    gaps = {b - a for a, b in zip(ds, ds[1:])}
    if not gaps <= {1, 2} or gaps != {1, 2}:
        failed.append("gaps must be 1 or 2 with at least one of each")
    poly, _ = normalize_sign(poly)
    p = poly.p
    variant = "plus_q" if poly.q > 0 else "minus_q"
    q = abs(poly.q)
    if len(ds) != q:
        failed.append(f"need exactly {q} digits")
    if variant == "plus_q" and not 2 * p > q + 2:
        failed.append("need 2p > q + 2")
    if variant == "minus_q" and not 2 * p > q - 2:
        failed.append("need 2p > q - 2")
    diffs = {a - b for a in ds for b in ds}
    if not set(range(-(q - 1), q)) <= diffs:
        failed.append("D - D must contain 0, +-1, ..., +-(q-1)")
    needed = (2 * p - 2, 2 * q - p) if variant == "plus_q" else (2 * p + 1, 2 * q - p - 2)
    for x in needed:
        if x not in diffs:
            failed.append(f"{x} not in D - D")
    if failed:
        return CertificateCheck(CertificateVerdict.INCONCLUSIVE, failed)
    certs = thm5_certificates(poly, variant)
    for label, exp, target in certs:
        if not verify(exp, target, poly, diffs):
            failed.append(f"certificate {label} did not verify: {exp}")
    if failed:
        return CertificateCheck(CertificateVerdict.INCONCLUSIVE, failed, certs)
    verdict = CertificateVerdict.CONNECTED_PLUS_Q if variant == "plus_q" else CertificateVerdict.CONNECTED_MINUS_Q
    return CertificateCheck(verdict, [], certs)


@dataclass
class SweepRow:
    b: Fraction
    verdict: Verdict | None
    states: int = 0
    ms: float = 0.0
    error: str = ""


def _sweep_one(args) -> SweepRow:
    poly, b, terms, state_limit = args
    t0 = time.perf_counter()
    try:
        rep = decide(DigitSystem(poly, (0, 1, b)), terms=terms, state_limit=state_limit)
    except (StateLimitExceeded, ValueError) as exc:
        return SweepRow(b, None, 0, 1000 * (time.perf_counter() - t0), str(exc))
    return SweepRow(b, rep.verdict, rep.states, 1000 * (time.perf_counter() - t0))


def sweep(poly: QuadraticPoly, b_values: Iterable, *, jobs: int = 1,
          terms: int = DEFAULT_TERMS, state_limit: int = DEFAULT_STATE_LIMIT) -> list[SweepRow]:
    """Decide D = {0, 1, b} at each sampled b, in input order."""
    tasks = [(poly, as_rational(b), terms, state_limit) for b in b_values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_one, tasks))
    else:
        rows = [_sweep_one(t) for t in tasks]
    for row in rows:
        if row.error:
            log.warning("b=%s failed: %s", row.b, row.error)
    return rows


def transitions(rows: Sequence[SweepRow]) -> list[tuple[Fraction, Fraction]]:
    """Consecutive sample pairs whose verdicts differ."""
    out = []
    for r0, r1 in zip(rows, rows[1:]):
        if r0.verdict and r1.verdict and r0.verdict != r1.verdict:
            out.append((r0.b, r1.b))
    return out


def frange(start, stop, step) -> list[Fraction]:
    """Exact arithmetic progression start, start+step, ... <= stop."""
    start, stop, step = as_rational(start), as_rational(stop), as_rational(step)
    if step <= 0:
        raise ValueError("step must be positive")
    out = []
    x = start
    while x <= stop:
        out.append(x)
        x += step
    return out
