"""Coordinates of A^{-i} v in the basis {v, Av} and rigorous bounds on their
absolute series.

Writing A^{-i} v = alpha_i v + beta_i Av, both sequences obey the three-term
recurrence q x_{i+2} + p x_{i+1} + x_i = 0 (Cayley-Hamilton), seeded by
alpha_1 = -p/q, alpha_2 = (p^2 - q)/q^2, beta_1 = -1/q, beta_2 = p/q^2.
The sums alpha~ = sum |alpha_i| and beta~ = sum |beta_i| bound every neighbor
lattice point, which is what makes the neighbor automaton finite.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .algebra import Mat2, QuadraticPoly, discriminant, normalize_sign

DEFAULT_TERMS = 13
MAX_BLOCK = 64
SQRT_SCALE = 10**6


@dataclass(frozen=True)
class CoordSeq:
    poly: QuadraticPoly
    alphas: tuple[Fraction, ...]
    betas: tuple[Fraction, ...]

    def __len__(self):
        return len(self.alphas)

    def alpha(self, i: int) -> Fraction:
        """1-based access, matching the usual indexing."""
        return self.alphas[i - 1]

    def beta(self, i: int) -> Fraction:
        return self.betas[i - 1]


@dataclass(frozen=True)
class TailBounds:
    alpha_bound: Fraction
    beta_bound: Fraction
    terms_used: int
    exact: bool = False
    method: str = field(default="", compare=False)

    def as_dict(self) -> dict:
        return {
            "alpha_bound": str(self.alpha_bound),
            "beta_bound": str(self.beta_bound),
            "alpha_bound_float": float(self.alpha_bound),
            "beta_bound_float": float(self.beta_bound),
            "terms_used": self.terms_used,
            "exact": self.exact,
            "method": self.method,
        }


def inverse_root_matrix(poly: QuadraticPoly) -> Mat2:
    """B = [[0, 1], [-1/q, -p/q]], mapping (x_i, x_{i+1}) to (x_{i+1}, x_{i+2})."""
    q = Fraction(poly.q)
    return Mat2(0, 1, -1 / q, -poly.p / q)


def seeds(poly: QuadraticPoly):
    p, q = Fraction(poly.p), Fraction(poly.q)
    return (-p / q, (p * p - q) / (q * q)), (-1 / q, p / (q * q))


def coord_seq(poly: QuadraticPoly, n: int) -> CoordSeq:
    if n < 2:
        raise ValueError("need n >= 2")
    (a1, a2), (b1, b2) = seeds(poly)
    alphas, betas = [a1, a2], [b1, b2]
    p, q = poly.p, poly.q
    for _ in range(n - 2):
        alphas.append(-(p * alphas[-1] + alphas[-2]) / q)
        betas.append(-(p * betas[-1] + betas[-2]) / q)
    return CoordSeq(poly, tuple(alphas), tuple(betas))


def sqrt_bounds(x: Fraction, scale: int = SQRT_SCALE) -> tuple[Fraction, Fraction]:
    """Rationals lo <= sqrt(x) <= hi with hi - lo = 1/scale."""
    if x < 0:
        raise ValueError("negative input")
    k = isqrt((x.numerator * scale * scale) // x.denominator)
    return Fraction(k, scale), Fraction(k + 1, scale)


def _complex_tail(poly: QuadraticPoly, n: int):
    """Geometric tails for Delta < 0, where both inverse roots have modulus q^{-1/2}.

    Every irrational factor is rounded in the direction that enlarges the result.
    """
    p, q = poly.p, poly.q
    _, r_hi = sqrt_bounds(Fraction(1, q))  # r = q^{-1/2}
    w_lo, _ = sqrt_bounds(Fraction(4 * q - p * p))
    if r_hi >= 1 or w_lo <= 0:
        raise ArithmeticError("rational rounding too coarse for this polynomial")
    denom = (1 - r_hi) * w_lo
    alpha_tail = 2 * r_hi ** (n - 1) / denom
    beta_tail = 2 * r_hi**n / denom
    return alpha_tail, beta_tail


def _contractive_block(B: Mat2, limit: int = MAX_BLOCK) -> tuple[int, Fraction]:
    P = B
    for j in range(1, limit + 1):
        rho = P.norm1()
        if rho < 1:
            return j, rho
        P = P @ B
    raise ArithmeticError(f"no power B^j with j <= {limit} has induced 1-norm below 1")


def _block_tail(poly: QuadraticPoly, seq: CoordSeq, n: int):
    """Tail sum_{i >= n} |x_i| <= (sum_{r<j} ||s_{n+r}||_1) / (1 - ||B^j||_1)
    with s_i = (x_i, x_{i+1}); needs terms up to index n + j."""
    B = inverse_root_matrix(poly)
    j, rho = _contractive_block(B)
    need = n + j
    if len(seq) < need:
        seq = coord_seq(poly, need)
    tails = []
    for xs in (seq.alphas, seq.betas):
        head = sum(abs(xs[n - 1 + r]) + abs(xs[n + r]) for r in range(j))
        tails.append(head / (1 - rho))
    return tails[0], tails[1], j


def _nonnegative_orbit(poly: QuadraticPoly) -> bool:
    """B maps the closed positive quadrant into itself and both seed vectors
    lie in it, so every alpha_i and beta_i is nonnegative."""
    B = inverse_root_matrix(poly)
    if any(x < 0 for x in B):
        return False
    return all(x >= 0 for pair in seeds(poly) for x in pair)


def _exact_sums(poly: QuadraticPoly) -> tuple[Fraction, Fraction]:
    B = inverse_root_matrix(poly)
    R = (Mat2.identity() - B).inverse()
    (a1, a2), (b1, b2) = seeds(poly)
    return (R @ (a1, a2))[0], (R @ (b1, b2))[0]


def tail_bounds(poly: QuadraticPoly, n: int = DEFAULT_TERMS) -> TailBounds:
    """Rational upper bounds for sum |alpha_i| and sum |beta_i|.

    The absolute sequences do not depend on the sign of p, so the work is done
    on the normalized polynomial.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    poly, _ = normalize_sign(poly)
    disc = discriminant(poly)
    if disc > 0 and _nonnegative_orbit(poly):
        a, b = _exact_sums(poly)
        return TailBounds(a, b, 0, exact=True, method="exact-geometric")

    seq = coord_seq(poly, n)
    head_a = sum(abs(x) for x in seq.alphas[: n - 1])
    head_b = sum(abs(x) for x in seq.betas[: n - 1])
    if disc < 0:
        ta, tb = _complex_tail(poly, n)
        return TailBounds(head_a + ta, head_b + tb, n, method="complex-roots")
    ta, tb, j = _block_tail(poly, seq, n)
    return TailBounds(head_a + ta, head_b + tb, n, method=f"block-geometric(j={j})")
