import hashlib

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from selfaffine.algebra import QuadraticPoly, companion
from selfaffine.neighbors import DigitSystem
from selfaffine.render import (
    FIGURES,
    BudgetExceeded,
    RenderConfig,
    component_estimate,
    connecting_gap,
    default_depth,
    enumerate_points,
    rasterize,
    read_pgm,
    render,
    visual_gap,
    write_pgm,
)

P = QuadraticPoly


def system(p, q, digits):
    return DigitSystem(P(p, q), digits)


def test_default_depth():
    assert default_depth(3) == 11
    assert default_depth(6) == 7
    assert default_depth(1) == 1
    assert RenderConfig().resolve_depth(3) == 11


def test_single_point_is_centred():
    img = rasterize(np.array([[0.3, -0.7]]), RenderConfig(width=9, height=9))
    assert (img == 0).sum() == 1
    assert img[4, 4] == 0


def test_zero_digit_only_gives_origin():
    cloud = enumerate_points(system(1, 3, (0,)), 5)
    assert np.array_equal(cloud, np.zeros((1, 2)))


def test_point_count():
    assert enumerate_points(system(1, 3, (0, 1, 3)), 9).shape == (3**9, 2)


def test_budget_error():
    with pytest.raises(BudgetExceeded):
        enumerate_points(system(1, 3, (0, 1, 3)), 9, budget=1000)
    with pytest.raises(BudgetExceeded):
        RenderConfig(depth=20).resolve_depth(3)


def test_points_match_exact_sums():
    s = system(2, 3, (0, 1, 3))
    Ainv = companion(s.poly).inverse()
    cloud = enumerate_points(s, 3)
    expected = set()
    for d1 in s.digits:
        for d2 in s.digits:
            for d3 in s.digits:
                x = (0, 0)
                for d in (d3, d2, d1):
                    x = Ainv @ (x[0] + d, x[1])
                expected.add((round(float(x[0]), 9), round(float(x[1]), 9)))
    got = {(round(a, 9), round(b, 9)) for a, b in cloud}
    assert got == expected


def test_render_is_deterministic(tmp_path):
    s = system(1, -3, (0, 1, 3))
    cfg = RenderConfig(depth=8, width=200, height=200)
    a, _ = render(s, tmp_path / "a.pgm", cfg)
    b, _ = render(s, tmp_path / "b.pgm", cfg)
    assert hashlib.sha256(a.read_bytes()).digest() == hashlib.sha256(b.read_bytes()).digest()


def test_pgm_round_trip(tmp_path):
    img = np.random.default_rng(0).integers(0, 256, size=(7, 11), dtype=np.uint8)
    path = write_pgm(tmp_path / "x.pgm", img)
    assert path.read_bytes().startswith(b"P5\n11 7\n255\n")
    assert np.array_equal(read_pgm(path), img)


def test_read_pgm_rejects_ascii(tmp_path):
    (tmp_path / "x.pgm").write_bytes(b"P2\n1 1\n255\n0\n")
    with pytest.raises(ValueError):
        read_pgm(tmp_path / "x.pgm")


@settings(max_examples=15, deadline=None)
@given(
    st.sampled_from([(1, 3), (2, 3), (3, 3), (1, -3), (0, 3), (-1, -3)]),
    st.sampled_from([(0, 1, 2), (0, 1, 3), (0, 1, 4)]),
    st.integers(2, 6),
)
def test_depth_sandwich(pq, digits, depth):
    """Depth-N points are depth-(N+1) points, and each deeper point lies
    within max |A^{-(N+1)} d v| of a shallower one."""
    s = system(*pq, digits)
    coarse = enumerate_points(s, depth)
    fine = enumerate_points(s, depth + 1)
    key = lambda a: {tuple(np.round(r, 9)) for r in a}
    assert key(coarse) <= key(fine)
    M = np.array([[float(x) for x in row] for row in (companion(s.poly).inverse() ** (depth + 1)).rows()])
    radius = max(np.linalg.norm(M @ np.array([float(d), 0.0])) for d in digits)
    dists = np.sqrt(((fine[:, None, :] - coarse[None, :, :]) ** 2).sum(-1)).min(axis=1)
    assert dists.max() <= radius * (1 + 1e-9) + 1e-12


def test_component_estimate_basic():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [5.0, 0.0]])
    assert component_estimate(pts, 0.6) == 2
    assert component_estimate(pts, 2.1) == 1
    assert component_estimate(pts, 0.1) == 3
    assert component_estimate(pts[:1], 0.1) == 1
    with pytest.raises(ValueError):
        component_estimate(pts, 0)


def exact_components(pts, gap):
    """Union of closed radius-gap balls, by brute-force pairwise distances."""
    from scipy.sparse.csgraph import connected_components

    pts = np.unique(pts, axis=0)
    dist = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    return connected_components(dist <= 2 * gap, directed=False)[0]


@settings(deadline=None)
@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=1, max_size=30),
       st.floats(0.05, 3))
def test_estimate_only_over_merges(points, gap):
    pts = np.array(points)
    est = component_estimate(pts, gap)
    assert exact_components(pts, 3 * gap) <= est <= exact_components(pts, gap)


def test_connected_config_gives_one_component():
    s = system(2, 3, (0, 1, 3))
    depth = 9
    cloud = enumerate_points(s, depth)
    assert component_estimate(cloud, connecting_gap(s, cloud, depth)) == 1


def test_disconnected_config_splits_at_pixel_scale():
    s = system(1, 3, (0, 1, 3))
    cloud = enumerate_points(s, default_depth(3))
    assert component_estimate(cloud, visual_gap(cloud)) >= 2


def test_figure_table():
    assert len(FIGURES) == 10
    for label, p, q, digits, v in FIGURES.values():
        DigitSystem(P(p, q), digits)
        assert v in ((1, 0), (0, 1))


def test_fig3a_golden_image(tmp_path):
    """Self-referential golden file; regenerate only on a deliberate change."""
    from conftest import GOLDEN

    _, p, q, digits, basis = FIGURES["fig3a"]
    path, _ = render(system(p, q, digits), tmp_path / "fig3a.pgm",
                     RenderConfig(depth=6, basis_vector=basis))
    expected = (GOLDEN / "fig3a_depth6.sha256").read_text().strip()
    assert hashlib.sha256(path.read_bytes()).hexdigest() == expected
