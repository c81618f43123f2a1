"""Exact integer/rational linear algebra and LLL."""

import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nfhnf.errors import NotPositiveDefiniteError
from nfhnf.linalg import (
    det_int,
    gram_inner,
    hnf_int,
    hnf_int_lower,
    identity_matrix,
    lll_reduce,
    mat_mul,
    nullspace_int,
    solve_rational,
    sqrt_lower,
    sqrt_upper,
    xgcd,
)

small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-30, 30), min_size=c, max_size=c),
            min_size=r, max_size=r)))


def row_lattices_equal(a, b):
    """Mutual membership of nonzero rows, solved exactly over Q.

    Membership is decided against the HNF of the target (independent
    rows), where the solution of x * rows = vec is unique, so checking
    integrality of that one solution is sound.
    """
    def contains(mat, vec):
        rows = [r for r in hnf_int(mat)[0] if any(r)]
        if not rows:
            return not any(vec)
        x = solve_rational(rows, vec)
        return x is not None and all(f.denominator == 1 for f in x)

    return (all(contains(b, row) for row in a if any(row))
            and all(contains(a, row) for row in b if any(row)))


class TestHnfInt:
    def test_gcd_pivot(self):
        h, u = hnf_int([[4, 6], [2, 3]])
        assert h == [[2, 3], [0, 0]]
        assert mat_mul(u, [[4, 6], [2, 3]]) == h
        assert abs(det_int(u)) == 1

    def test_identity_fixed(self):
        h, _ = hnf_int(identity_matrix(3))
        assert h == identity_matrix(3)

    def test_already_reduced(self):
        h, _ = hnf_int([[2, 1], [0, 3]])
        assert h == [[2, 1], [0, 3]]

    @settings(max_examples=80, deadline=None)
    @given(small_matrices)
    def test_transform_and_idempotence(self, m):
        h, u = hnf_int(m)
        assert mat_mul(u, m) == h
        assert abs(det_int(u)) == 1
        again, _ = hnf_int(h)
        assert again == h
        assert row_lattices_equal(m, h)

    @settings(max_examples=40, deadline=None)
    @given(small_matrices)
    def test_pivot_convention(self, m):
        h, _ = hnf_int(m)
        seen_zero = False
        prev_pivot_col = -1
        for row in h:
            nz = [j for j, x in enumerate(row) if x]
            if not nz:
                seen_zero = True
                continue
            assert not seen_zero, "zero rows must come last"
            assert nz[0] > prev_pivot_col
            prev_pivot_col = nz[0]
        for i, row in enumerate(h):
            nz = [j for j, x in enumerate(row) if x]
            if not nz:
                continue
            p = row[nz[0]]
            assert p > 0
            for k in range(i):
                assert 0 <= h[k][nz[0]] < p

    def test_lower_variant_is_ideal_shape(self):
        h, u = hnf_int_lower([[1, 3], [0, 5]])
        assert h == [[5, 0], [2, 1]]
        assert mat_mul(u, [[1, 3], [0, 5]]) == h
        h2, _ = hnf_int_lower([[5, 0], [2, 1]])
        assert h2 == h


class TestSolveRational:
    def test_diagonal(self):
        assert solve_rational([[2, 0], [0, 2]], [1, 1]) == [Fraction(1, 2)] * 2

    def test_back_substitution(self):
        assert solve_rational([[1, 1], [0, 1]], [1, 2]) == [1, 1]

    def test_scalar(self):
        assert solve_rational([[2]], [Fraction(1, 3)]) == [Fraction(1, 6)]

    def test_no_solution(self):
        assert solve_rational([[1, 0]], [0, 1]) is None

    @settings(max_examples=60, deadline=None)
    @given(small_matrices, st.randoms(use_true_random=False))
    def test_substitution(self, m, rng):
        coeffs = [rng.randint(-5, 5) for _ in m]
        b = [sum(c * row[j] for c, row in zip(coeffs, m))
             for j in range(len(m[0]))]
        x = solve_rational(m, b)
        assert x is not None
        assert [sum(xi * row[j] for xi, row in zip(x, m))
                for j in range(len(m[0]))] == b


class TestNullspace:
    def test_equal_rows(self):
        ns = nullspace_int([[1], [1]])
        assert len(ns) == 1 and sorted(ns[0]) == [-1, 1]

    def test_injective(self):
        assert nullspace_int(identity_matrix(2)) == []
        assert nullspace_int([[2, 4]]) == []

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.lists(st.integers(-9, 9), min_size=2, max_size=2),
                    min_size=3, max_size=3))
    def test_saturation_against_rational_kernel(self, m):
        ns = nullspace_int(m)
        for row in ns:
            assert all(sum(row[i] * m[i][j] for i in range(3)) == 0
                       for j in range(2))
        # Brute-force oracle: rational kernel from echelon form, denominators
        # cleared; the two lattices must coincide.
        rank = len([r for r in hnf_int(m)[0] if any(r)])
        assert len(ns) == 3 - rank
        if ns:
            import math
            kernel = []
            for v in ns:
                g = 0
                for x in v:
                    g = math.gcd(g, x)
                kernel.append([x // g for x in v])
            assert row_lattices_equal(ns, kernel)


def gram_of(basis, gram):
    return [[gram_inner(r, s, gram) for s in basis] for r in basis]


def assert_lll_reduced(basis, gram, delta=Fraction(3, 4)):
    """Exact Gram-Schmidt verification of size reduction and Lovasz."""
    n = len(basis)
    mu = [[Fraction(0)] * n for _ in range(n)]
    star = []
    star_sq = []
    for i in range(n):
        v = [Fraction(x) for x in basis[i]]
        for j in range(i):
            mu[i][j] = gram_inner(basis[i], star[j], gram) / star_sq[j]
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        star.append(v)
        star_sq.append(gram_inner(v, v, gram))
        assert star_sq[i] > 0
    for i in range(n):
        for j in range(i):
            assert abs(mu[i][j]) <= Fraction(1, 2)
    for k in range(1, n):
        assert star_sq[k] >= (Fraction(delta) - mu[k][k - 1] ** 2) * star_sq[k - 1]


class TestLll:
    def test_identity_unchanged(self):
        eye = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        red, t = lll_reduce([[1, 0], [0, 1]], eye)
        assert red == [[1, 0], [0, 1]]
        assert t == [[1, 0], [0, 1]]

    def test_gaussian_prime_ideal(self):
        # Ideal (2+i) in Z[i] with the embedding Gram 2*I.  Oracle: exhaust
        # all lattice elements with coordinates in [-5, 5]^2 and record the
        # smallest nonzero squared length.
        gram = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(2)]]
        basis = [[5, 0], [2, 1]]
        best = None
        for a, b in product(range(-5, 6), repeat=2):
            if (a, b) == (0, 0):
                continue
            v = [a * basis[0][0] + b * basis[1][0],
                 a * basis[0][1] + b * basis[1][1]]
            q = gram_inner(v, v, gram)
            best = q if best is None else min(best, q)
        assert best == 10
        red, t = lll_reduce(basis, gram)
        assert gram_inner(red[0], red[0], gram) == 10
        assert mat_mul(t, basis) == red
        assert abs(det_int(t)) == 1
        assert set(map(abs, red[0])) == {1, 2}

    def test_unbalanced_basis(self):
        eye = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        basis = [[1_000_000, 0], [999_999, 1]]
        # Oracle: exhaustive search over small coefficient combinations.
        best = None
        for a, b in product(range(-3, 4), repeat=2):
            if (a, b) == (0, 0):
                continue
            v = [a * basis[0][0] + b * basis[1][0],
                 a * basis[0][1] + b * basis[1][1]]
            q = gram_inner(v, v, eye)
            best = q if best is None else min(best, q)
        assert best == 2
        red, t = lll_reduce(basis, eye)
        assert any(gram_inner(r, r, eye) == 2 for r in red)
        assert mat_mul(t, basis) == red

    def test_lovasz_and_first_vector_bound(self):
        rng = random.Random(5)
        eye3 = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
        for _ in range(25):
            while True:
                basis = [[rng.randint(-40, 40) for _ in range(3)]
                         for _ in range(3)]
                if det_int(basis) != 0:
                    break
            red, t = lll_reduce(basis, eye3)
            assert abs(det_int(t)) == 1
            assert mat_mul(t, basis) == red
            assert_lll_reduced(red, eye3)
            # First-vector bound for delta = 3/4, compared in cube to stay
            # rational: |b1|^6 <= (2^2)^3 * det(lattice gram).
            lat = gram_of(red, eye3)
            first = gram_inner(red[0], red[0], eye3)
            det_gram = det_int([[int(x) for x in row] for row in lat])
            assert first ** 3 <= Fraction(2 ** (3 * 2)) * det_gram

    def test_rejects_indefinite_gram(self):
        gram = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(-1)]]
        with pytest.raises(NotPositiveDefiniteError):
            lll_reduce([[1, 0], [0, 1]], gram)

    def test_delta_range(self):
        eye = [[Fraction(1)]]
        with pytest.raises(ValueError):
            lll_reduce([[1]], eye, delta=Fraction(1, 4))
        with pytest.raises(ValueError):
            lll_reduce([[1]], eye, delta=Fraction(5, 4))


class TestScalarHelpers:
    def test_xgcd(self):
        for a, b in [(0, 0), (4, 6), (-4, 6), (7, 0), (0, -5), (270, 192)]:
            g, s, t = xgcd(a, b)
            assert g == s * a + t * b
            assert g >= 0

    def test_sqrt_bounds(self):
        for q in [Fraction(2), Fraction(10), Fraction(1, 3), Fraction(0),
                  Fraction(49), Fraction(9, 4)]:
            lo, hi = sqrt_lower(q), sqrt_upper(q)
            assert lo * lo <= q <= hi * hi
            assert hi - lo <= Fraction(2, 2 ** 64)
