"""Exact linear algebra over Z and Q.

Matrices are lists of rows; vectors act on the left, so ``x @ a`` style
products are ``x * a`` with ``x`` a row vector.  All routines use
arbitrary-precision integers and :class:`fractions.Fraction` -- nothing
here is floating point.

Provides: row Hermite normal form with transform, rational linear system
solving, saturated integer left-nullspace, LLL reduction with respect to
an arbitrary positive-definite Gram matrix, and fraction-free
determinants.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .errors import NotPositiveDefiniteError

try:
    from gmpy2 import gcdext as _gcdext
except ImportError:  # pragma: no cover - gmpy2 is an optional accelerator
    _gcdext = None


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    if _gcdext is not None:
        g, s, t = _gcdext(a, b)
        return int(g), int(s), int(t)
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    """Product of two matrices given as lists of rows."""
    cols = len(b[0])
    inner = len(b)
    return [
        [sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for row in a
    ]


def mat_vec(v, m):
    """Row vector times matrix."""
    return [sum(v[k] * m[k][j] for k in range(len(m))) for j in range(len(m[0]))]


def hnf_int(m: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row HNF of an integer matrix with unimodular transform.

    Returns (h, u) with ``h = u*m``, ``|det u| = 1``, pivots positive,
    entries above each pivot reduced into [0, pivot), zero rows last.
    Pivot selection takes the smallest row index with a nonzero entry,
    which makes the output deterministic (the HNF itself is unique).
    """
    h = [list(row) for row in m]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    u = identity_matrix(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = None
        for i in range(r, rows):
            if h[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            h[r], h[pivot] = h[pivot], h[r]
            u[r], u[pivot] = u[pivot], u[r]
        for i in range(r + 1, rows):
            if not h[i][c]:
                continue
            a, b = h[r][c], h[i][c]
            g, s, t = xgcd(a, b)
            aq, bq = a // g, b // g
            h[r], h[i] = (
                [s * x + t * y for x, y in zip(h[r], h[i])],
                [-bq * x + aq * y for x, y in zip(h[r], h[i])],
            )
            u[r], u[i] = (
                [s * x + t * y for x, y in zip(u[r], u[i])],
                [-bq * x + aq * y for x, y in zip(u[r], u[i])],
            )
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return h, u


def hnf_int_lower(m: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Mirror-image row HNF: pivots sit at the right end of each row.

    For a full-rank square input the result is lower triangular with
    positive diagonal and, below each pivot, entries reduced into
    [0, pivot).  This is the canonical shape used for ideal basis
    matrices and triangular pseudo-bases.
    """
    rev = [list(reversed(row)) for row in m]
    h, u = hnf_int(rev)
    h = [list(reversed(row)) for row in reversed(h)]
    u = list(reversed(u))
    return h, u


def solve_rational(a, b):
    """Solve ``x * a = b`` exactly over Q; return None if inconsistent.

    ``a`` is a matrix (list of rows, int or Fraction entries), ``b`` a
    vector of length ``cols(a)``.  The solution row vector has length
    ``rows(a)``.  When the system is underdetermined an arbitrary
    solution is returned.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if len(b) != cols:
        raise ValueError("dimension mismatch")
    # Work on the transpose: a^T y = b^T with y the unknown column.
    aug = [[Fraction(a[i][j]) for i in range(rows)] + [Fraction(b[j])] for j in range(cols)]
    piv_cols = []
    r = 0
    for c in range(rows):
        pivot = None
        for i in range(r, cols):
            if aug[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(cols):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, cols):
        if aug[i][rows]:
            return None
    x = [Fraction(0)] * rows
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][rows]
    return x


def nullspace_int(a: list[list[int]]) -> list[list[int]]:
    """Saturated basis of the left integer nullspace {x : x*a = 0}.

    Rows of the unimodular HNF transform that map to zero rows of the
    HNF span the full rational kernel intersected with Z^rows, so the
    returned basis is saturated by construction.
    """
    h, u = hnf_int(a)
    out = [u[i] for i in range(len(h)) if not any(h[i])]
    return out


def det_int(m: list[list[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not a[k][k]:
            swap = None
            for i in range(k + 1, n):
                if a[i][k]:
                    swap = i
                    break
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def int_mat_inverse(u: list[list[int]]) -> list[list[int]]:
    """Inverse of a unimodular integer matrix, exactly."""
    n = len(u)
    inv = []
    for i in range(n):
        e = [1 if j == i else 0 for j in range(n)]
        x = solve_rational(u, e)
        if x is None:
            raise ValueError("matrix not invertible")
        inv.append(x)
    # inv rows currently satisfy inv*u = I with Fraction entries.
    out = [[int(v) for v in row] for row in inv]
    for row, frow in zip(out, inv):
        for v, f in zip(row, frow):
            if v != f:
                raise ValueError("matrix not unimodular")
    return out


def sqrt_upper(q: Fraction, bits: int = 64) -> Fraction:
    """Rational upper bound on sqrt(q), within 2^-bits absolute error."""
    if q < 0:
        raise ValueError("negative argument")
    n, d = q.numerator, q.denominator
    scale = 1 << bits
    m = n * d * scale * scale
    s = isqrt(m)
    if s * s == m:
        return Fraction(s, d * scale)
    return Fraction(s + 1, d * scale)


def sqrt_lower(q: Fraction, bits: int = 64) -> Fraction:
    """Rational lower bound on sqrt(q), within 2^-bits absolute error."""
    if q < 0:
        raise ValueError("negative argument")
    n, d = q.numerator, q.denominator
    scale = 1 << bits
    return Fraction(isqrt(n * d * scale * scale), d * scale)


def gram_inner(x, y, gram):
    """Inner product x * gram * y^T with Fraction output."""
    total = Fraction(0)
    for i, xi in enumerate(x):
        if not xi:
            continue
        gi = gram[i]
        total += xi * sum(gi[j] * yj for j, yj in enumerate(y) if yj)
    return total


def lll_reduce(basis, gram, delta=Fraction(3, 4)):
    """LLL-reduce integer basis rows w.r.t. the inner product x*gram*y^T.

    Exact rational Gram-Schmidt throughout; no floating point is
    involved, so the Lovasz condition genuinely holds on output.
    Returns (reduced, transform) with reduced = transform * basis and
    transform unimodular.

    Raises NotPositiveDefiniteError when a non-positive squared length
    shows up during orthogonalization (the advertised detection for bad
    Gram matrices).
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta <= 1:
        raise ValueError("delta must satisfy 1/4 < delta <= 1")
    n = len(basis)
    b = [list(row) for row in basis]
    u = identity_matrix(n)

    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [None] * n
    bstar_sq = [Fraction(0)] * n

    def compute_row(i):
        v = [Fraction(x) for x in b[i]]
        for j in range(i):
            mu[i][j] = gram_inner(b[i], bstar[j], gram) / bstar_sq[j]
            v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
        bstar[i] = v
        bstar_sq[i] = gram_inner(v, v, gram)
        if bstar_sq[i] <= 0:
            raise NotPositiveDefiniteError(
                "non-positive squared length during reduction")

    compute_row(0)
    k = 1
    while k < n:
        compute_row(k)
        # Size-reduce b_k against b_{k-1}, ..., b_0.
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                u[k] = [x - q * y for x, y in zip(u[k], u[j])]
                compute_row(k)
        if bstar_sq[k] >= (delta - mu[k][k - 1] ** 2) * bstar_sq[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            u[k], u[k - 1] = u[k - 1], u[k]
            k -= 1
            compute_row(k)
            if k == 0:
                k = 1
    return b, u
