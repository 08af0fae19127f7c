from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from selfaffine.algebra import QuadraticPoly, companion, eligible_polys

GOLDEN = Path(__file__).parent / "golden"

TEN_POLYS = eligible_polys(3)


@pytest.fixture(scope="session")
def ten_polys():
    assert len(TEN_POLYS) == 10
    return TEN_POLYS


def poly_id(poly: QuadraticPoly) -> str:
    return f"p{poly.p}q{poly.q}"


def root_moduli(p, q):
    return np.abs(np.roots([1.0, float(p), float(q)]))


def float_inverse(poly: QuadraticPoly) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in companion(poly).inverse().rows()])


def enumeration_survivors(poly: QuadraticPoly, diffs, target, depth: int) -> list[int]:
    """Brute-force oracle for target in T - T, independent of the automaton.

    Enumerates partial sums s_k = sum_{i<=k} b_i A^{-i} v digit by digit and
    keeps those with |target - s_k| <= M * sum_{i>k} |A^{-i} v| (Euclidean),
    the largest distance any continuation can still cover. Returns the number
    of survivors per depth; a member always keeps at least one.
    """
    Ainv = float_inverse(poly)
    M = max(abs(float(b)) for b in diffs)
    # |A^{-i} v| for i up to well past float precision
    vecs = [np.array([1.0, 0.0])]
    for _ in range(depth + 600):
        vecs.append(Ainv @ vecs[-1])
    norms = np.array([np.linalg.norm(x) for x in vecs])
    tail = M * np.cumsum(norms[::-1])[::-1]  # tail[k] = M * sum_{i>=k} |A^{-i} v|
    # partial sums kept exactly as s_k = A^{-k} u_k / t with integer u_k
    t = int(np.lcm.reduce([int(b.denominator) for b in diffs]))
    sdiffs = np.array([int(b * t) for b in diffs], dtype=np.int64)
    A = np.array([[int(x) for x in row] for row in companion(poly).rows()], dtype=np.int64)
    Ak_inv = np.eye(2)
    tgt = np.array([float(x) for x in target])
    frontier = np.zeros((1, 2), dtype=np.int64)
    counts = []
    for k in range(1, depth + 1):
        Ak_inv = Ainv @ Ak_inv
        au = frontier @ A.T
        nxt = (au[:, None, :] + np.stack([sdiffs, np.zeros_like(sdiffs)], 1)[None]).reshape(-1, 2)
        nxt = np.unique(nxt, axis=0)
        s = (nxt.astype(float) @ Ak_inv.T) / t
        slack = tail[k + 1] + 1e-9 * (1 + M)
        frontier = nxt[np.linalg.norm(tgt - s, axis=1) <= slack]
        counts.append(len(frontier))
        if not len(frontier):
            break
    return counts
