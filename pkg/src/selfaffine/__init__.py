"""Exact connectedness decisions for planar self-affine sets T(A, D) with
collinear rational digit sets."""
from .algebra import (
    LatticePoint,
    Mat2,
    QuadraticPoly,
    companion,
    discriminant,
    is_expanding,
    normalize_sign,
)
from .connectivity import (
    ConnectivityReport,
    EGraph,
    Verdict,
    check_thm4_bound,
    check_thm5,
    decide,
    decide_xn_pm_q,
    is_tile_candidate,
    sweep,
)
from .coords import CoordSeq, TailBounds, coord_seq, tail_bounds
from .neighbors import DigitSystem, build_automaton, is_member, iterate, step
from .radix import RadixExpansion, eval_expansion, parse_expansion, thm5_certificates, verify

__version__ = "0.1.0"
