"""Neighbor generation and the finite automaton deciding l in T - T.

If l = gamma v + delta Av = sum_i b_i A^{-i} v with b_i in D - D, then
l' = A l - b_1 v has the same form with the shifted digit string, and every
point of T - T satisfies |gamma| <= M alpha~, |delta| <= M beta~ (M = max|D - D|).
When digits share the denominator t, every iterate of a target in (1/t)Z^2
stays on that lattice, so the reachable states form a finite graph. The target
lies in T - T exactly when it has an infinite path inside the box, i.e. when
it survives pruning of dead ends.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, lcm
from typing import Iterable, Sequence

from .algebra import LatticePoint, QuadraticPoly, as_rational
from .coords import DEFAULT_TERMS, TailBounds, tail_bounds
from .radix import RadixExpansion

log = logging.getLogger(__name__)

DEFAULT_STATE_LIMIT = 10**7

__all__ = [
    "LatticePoint", "DigitSystem", "NeighborAutomaton", "Membership",
    "StateLimitExceeded", "step", "iterate", "build_automaton", "is_member",
]


class StateLimitExceeded(RuntimeError):
    """The reachable state graph outgrew the configured limit."""


@dataclass(frozen=True)
class DigitSystem:
    poly: QuadraticPoly
    digits: tuple[Fraction, ...]

    def __post_init__(self):
        ds = tuple(sorted({as_rational(d) for d in self.digits}))
        if len(ds) != len(tuple(self.digits)):
            raise ValueError("digits must be distinct")
        if len(ds) < 1:
            raise ValueError("need at least one digit")
        if 0 not in ds:
            raise ValueError("0 must be a digit; use DigitSystem.translated()")
        object.__setattr__(self, "digits", ds)

    @classmethod
    def translated(cls, poly: QuadraticPoly, digits: Iterable) -> "DigitSystem":
        """Shift the digits so the smallest one is 0."""
        ds = [as_rational(d) for d in digits]
        lo = min(ds)
        return cls(poly, tuple(d - lo for d in ds))

    @property
    def differences(self) -> tuple[Fraction, ...]:
        return tuple(sorted({a - b for a in self.digits for b in self.digits}))

    @property
    def denominator(self) -> int:
        return lcm(*(d.denominator for d in self.digits))

    @property
    def max_difference(self) -> Fraction:
        return self.digits[-1] - self.digits[0]

    def with_poly(self, poly: QuadraticPoly) -> "DigitSystem":
        return DigitSystem(poly, self.digits)


def step(l: LatticePoint, b1, poly: QuadraticPoly) -> LatticePoint:
    """l' = A l - b1 v: gamma' = -(q delta + b1), delta' = gamma - p delta."""
    g, d = l
    return LatticePoint(-(poly.q * d + as_rational(b1)), g - poly.p * d)


def iterate(l: LatticePoint, digit_prefix: Sequence, poly: QuadraticPoly) -> LatticePoint:
    for b in digit_prefix:
        l = step(l, b, poly)
    return l


@dataclass(frozen=True)
class Membership:
    """Outcome of a membership query.

    ``witness`` is an eventually periodic expansion of the target when it is a
    member. A negative answer is certified by ``explored`` reachable in-box
    states none of which admits an infinite path.
    """

    target: LatticePoint
    member: bool
    witness: RadixExpansion | None = None
    explored: int = 0
    reason: str = ""

    def __bool__(self):
        return self.member


@dataclass
class NeighborAutomaton:
    """Lazily explored state graph for one digit system.

    States are integer pairs (t*gamma, t*delta). ``succ[s]`` lists
    ``(digit index, successor)`` for in-box successors, with digit indices into
    the ascending difference set. ``alive`` is kept as the greatest subset of
    explored states in which every state has an alive successor.
    """

    system: DigitSystem
    bounds: TailBounds
    state_limit: int = DEFAULT_STATE_LIMIT
    succ: dict = field(default_factory=dict)
    alive: set = field(default_factory=set)

    def __post_init__(self):
        self.t = self.system.denominator
        self.diffs = self.system.differences
        self.scaled_diffs = [int(b * self.t) for b in self.diffs]
        M = self.system.max_difference
        self.gamma_max = floor(self.t * M * self.bounds.alpha_bound)
        self.delta_max = floor(self.t * M * self.bounds.beta_bound)
        self._p, self._q = self.system.poly.p, self.system.poly.q

    @property
    def states(self) -> int:
        return len(self.succ)

    def in_box(self, s) -> bool:
        return abs(s[0]) <= self.gamma_max and abs(s[1]) <= self.delta_max

    def scale(self, l: LatticePoint):
        """Integer state for ``l``, or None if l is off the (1/t) lattice."""
        g, d = l.gamma * self.t, l.delta * self.t
        if g.denominator != 1 or d.denominator != 1:
            return None
        return (int(g), int(d))

    def unscale(self, s) -> LatticePoint:
        return LatticePoint(Fraction(s[0], self.t), Fraction(s[1], self.t))

    def explore(self, start) -> None:
        """Add every in-box state reachable from ``start`` and re-prune."""
        if start in self.succ or not self.in_box(start):
            return
        p, q, diffs = self._p, self._q, self.scaled_diffs
        gmax, dmax = self.gamma_max, self.delta_max
        new = []
        queue = deque([start])
        self.succ[start] = None
        while queue:
            s = queue.popleft()
            g, d = s
            base_g, nd = -q * d, g - p * d
            out = []
            if abs(nd) <= dmax:
                for k, b in enumerate(diffs):
                    ng = base_g - b
                    if abs(ng) <= gmax:
                        n = (ng, nd)
                        out.append((k, n))
                        if n not in self.succ:
                            self.succ[n] = None
                            queue.append(n)
            self.succ[s] = out
            new.append(s)
            if len(self.succ) > self.state_limit:
                raise StateLimitExceeded(
                    f"more than {self.state_limit} states for {self.system.poly} "
                    f"with digits {[str(x) for x in self.system.digits]}"
                )
        self._prune(new)

    def _prune(self, new) -> None:
        # New states never point at older states outside themselves except
        # through already-explored ones, so pruning the union is exact.
        candidates = self.alive | set(new)
        count = {}
        preds: dict = {}
        for s in candidates:
            c = 0
            for _, n in self.succ[s]:
                if n in candidates:
                    c += 1
                    preds.setdefault(n, []).append(s)
            count[s] = c
        dead = deque(s for s, c in count.items() if c == 0)
        removed = set()
        while dead:
            s = dead.popleft()
            if s in removed:
                continue
            removed.add(s)
            for r in preds.get(s, ()):
                if r in removed:
                    continue
                count[r] -= 1
                if count[r] == 0:
                    dead.append(r)
        self.alive = candidates - removed

    def is_closed(self) -> bool:
        """Every alive state has an alive successor (one more pruning pass is a no-op)."""
        return all(any(n in self.alive for _, n in self.succ[s]) for s in self.alive)

    def _bfs_paths(self, start, limit=None, until=None):
        """Shortest alive paths from ``start``; successors are expanded in
        ascending digit order so each recorded path is the lexicographically
        smallest among the shortest ones."""
        paths = {start: ()}
        queue = deque([start])
        while queue:
            s = queue.popleft()
            path = paths[s]
            if limit is not None and len(path) >= limit:
                continue
            for k, n in self.succ[s]:
                if n not in self.alive:
                    continue
                if n == until:
                    return path + (k,)
                if n not in paths:
                    paths[n] = path + (k,)
                    queue.append(n)
        return None if until is not None else paths

    def witness(self, start) -> RadixExpansion:
        """Shortest eventually periodic digit string (preperiod plus period) from
        ``start`` through alive states; ties go to the lexicographically smaller
        digit sequence."""
        prefixes = self._bfs_paths(start)
        best = None
        for u, prefix in sorted(prefixes.items(), key=lambda kv: (len(kv[1]), kv[1])):
            if best is not None and len(prefix) + 1 > len(best[0]) + len(best[1]):
                break
            room = None if best is None else len(best[0]) + len(best[1]) - len(prefix)
            cycle = self._bfs_paths(u, limit=room, until=u)
            if cycle is None:
                continue
            key = (len(prefix) + len(cycle), prefix + cycle)
            if best is None or key < (len(best[0]) + len(best[1]), best[0] + best[1]):
                best = (prefix, cycle)
        assert best is not None, "alive state without a cycle"
        pre, per = ([self.diffs[k] for k in part] for part in best)
        return RadixExpansion(preperiod=tuple(pre), period=tuple(per))

    def query(self, l: LatticePoint) -> Membership:
        l = LatticePoint(*l)
        s = self.scale(l)
        if s is None:
            return Membership(l, False, reason="off-lattice")
        if not self.in_box(s):
            return Membership(l, False, reason="outside neighbor box")
        self.explore(s)
        if s in self.alive:
            return Membership(l, True, self.witness(s), self.states)
        return Membership(l, False, explored=self.states, reason="no infinite in-box path")


def build_automaton(system: DigitSystem, bounds: TailBounds | None = None,
                    targets: Iterable = (), state_limit: int = DEFAULT_STATE_LIMIT,
                    terms: int = DEFAULT_TERMS) -> NeighborAutomaton:
    if bounds is None:
        bounds = tail_bounds(system.poly, terms)
    auto = NeighborAutomaton(system, bounds, state_limit)
    for l in targets:
        s = auto.scale(LatticePoint(*l))
        if s is not None:
            auto.explore(s)
    log.debug("automaton for %s: %d states, %d alive", system.poly, auto.states, len(auto.alive))
    return auto


def is_member(l, system: DigitSystem, automaton: NeighborAutomaton | None = None,
              **kwargs) -> Membership:
    """Decide l in T - T; truthy result carries a digit witness."""
    if automaton is None:
        automaton = build_automaton(system, **kwargs)
    return automaton.query(LatticePoint(*l))
