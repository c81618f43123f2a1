"""Certified complex embeddings of a number field.

Roots of the defining polynomial are approximated numerically (mpmath)
and then certified with exact rational arithmetic: around each numeric
approximation ``z`` we place the Weierstrass inclusion disk of radius
``deg * |f(z)| / prod |z - z_j|``.  When the inflated disks are pairwise
disjoint each contains exactly one root, which lets us classify roots as
real or as conjugate pairs and gives rigorous rational enclosures for
every embedding value.  All downstream arithmetic (interval Horner
evaluation, Gram matrix assembly) is exact over Fractions, so the only
approximate step is the initial root finding -- and its output is
verified, not trusted.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp
from mpmath.libmp import to_rational

from .linalg import sqrt_lower, sqrt_upper

# ---------------------------------------------------------------------------
# Interval helpers.  An interval is a (lo, hi) pair of Fractions; a box is a
# (re_interval, im_interval) pair.

def ival(x) -> tuple[Fraction, Fraction]:
    x = Fraction(x)
    return (x, x)


def iadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def isub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def imul(a, b):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(p), max(p))


def iwidth(a) -> Fraction:
    return a[1] - a[0]


def box_mul(a, b):
    re = isub(imul(a[0], b[0]), imul(a[1], b[1]))
    im = iadd(imul(a[0], b[1]), imul(a[1], b[0]))
    return (re, im)


def box_add(a, b):
    return (iadd(a[0], b[0]), iadd(a[1], b[1]))


def poly_eval_interval(coeffs, x):
    """Horner evaluation of a real-coefficient polynomial on an interval."""
    acc = ival(0)
    for c in reversed(coeffs):
        acc = iadd(imul(acc, x), ival(c))
    return acc


def poly_eval_box(coeffs, z):
    """Horner evaluation on a complex box."""
    acc = (ival(0), ival(0))
    for c in reversed(coeffs):
        acc = box_add(box_mul(acc, z), (ival(c), ival(0)))
    return acc


def interval_det(mat):
    """Determinant of a matrix of intervals via Laplace expansion."""
    n = len(mat)
    cache = {}

    def minor(row, cols):
        if row == n:
            return ival(1)
        key = (row, cols)
        if key in cache:
            return cache[key]
        acc = ival(0)
        sign = 1
        for idx, c in enumerate(cols):
            term = imul(mat[row][c], minor(row + 1, cols[:idx] + cols[idx + 1:]))
            if sign < 0:
                term = (-term[1], -term[0])
            acc = iadd(acc, term)
            sign = -sign
        cache[key] = acc
        return acc

    return minor(0, tuple(range(n)))


# ---------------------------------------------------------------------------
# Root certification.

def _mpf_to_fraction(x) -> Fraction:
    n, d = to_rational(mp.mpf(x)._mpf_)
    return Fraction(int(n), int(d))


def _cabs_sq(re: Fraction, im: Fraction) -> Fraction:
    return re * re + im * im


def _poly_eval_exact(coeffs, re, im):
    """Exact complex Horner at a rational point; returns (re, im)."""
    acc_re, acc_im = Fraction(0), Fraction(0)
    for c in reversed(coeffs):
        acc_re, acc_im = acc_re * re - acc_im * im + c, acc_re * im + acc_im * re
    return acc_re, acc_im


class RootEnclosures:
    """Certified enclosures for the roots of a monic integer polynomial.

    Attributes:
        real: list of (lo, hi) Fraction intervals, one per real root.
        complex_pairs: list of boxes for one representative (positive
            imaginary part) of each conjugate pair.
    """

    def __init__(self, real, complex_pairs):
        self.real = real
        self.complex_pairs = complex_pairs

    @property
    def signature(self):
        return (len(self.real), len(self.complex_pairs))


def isolate_roots(coeffs, precision_bits=128, max_rounds=8) -> RootEnclosures:
    """Certified root enclosures of a monic squarefree integer polynomial.

    ``coeffs`` is [c0, ..., c_{d-1}, 1].  Enclosure widths shrink toward
    2^-precision_bits; the working precision doubles until both the
    disjointness certificate and the width target hold.
    """
    d = len(coeffs) - 1
    if d == 1:
        r = Fraction(-coeffs[0])
        return RootEnclosures([(r, r)], [])
    target = Fraction(1, 2 ** precision_bits)
    prec = precision_bits + 64
    last_err = None
    for _ in range(max_rounds):
        try:
            return _isolate_at_precision(coeffs, d, prec, target)
        except _RetryPrecision as err:
            last_err = err
            prec *= 2
    raise ArithmeticError(f"root isolation failed to converge: {last_err}")


class _RetryPrecision(Exception):
    pass


def _isolate_at_precision(coeffs, d, prec, target):
    with mp.workprec(prec):
        approx = mp.polyroots([1] + list(reversed(coeffs[:-1])),
                              maxsteps=200, extraprec=prec)
        pts = []
        for z in approx:
            z = mp.mpc(z)
            pts.append((_mpf_to_fraction(z.real), _mpf_to_fraction(z.imag)))

    # Exact Weierstrass radii: r_i = d * |f(z_i)| / prod_{j != i} |z_i - z_j|.
    radii = []
    for i, (re, im) in enumerate(pts):
        fre, fim = _poly_eval_exact(coeffs, re, im)
        num = sqrt_upper(_cabs_sq(fre, fim))
        den = Fraction(1)
        for j, (re2, im2) in enumerate(pts):
            if j == i:
                continue
            dist = sqrt_lower(_cabs_sq(re - re2, im - im2))
            if dist == 0:
                raise _RetryPrecision("coincident approximations")
            den *= dist
        radii.append(d * num / den)

    if max(radii) > target:
        raise _RetryPrecision("radius above target width")

    def disjoint(i, j):
        ri, rj = radii[i], radii[j]
        sep = _cabs_sq(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1])
        return sep > (ri + rj) ** 2

    for i in range(d):
        for j in range(i + 1, d):
            if not disjoint(i, j):
                raise _RetryPrecision("inclusion disks overlap")

    # Classify roots by matching each disk with the reflection of its
    # conjugate: the conjugate of the root in disk i lives in exactly one
    # disk, and that disk identifies i as real (itself) or as half of a
    # conjugate pair.
    def reflection_hits(i):
        hits = []
        cre, cim = pts[i][0], -pts[i][1]
        for j in range(d):
            sep = _cabs_sq(cre - pts[j][0], cim - pts[j][1])
            if sep <= (radii[i] + radii[j]) ** 2:
                hits.append(j)
        return hits

    partner = []
    for i in range(d):
        hits = reflection_hits(i)
        if len(hits) != 1:
            raise _RetryPrecision("ambiguous conjugation pairing")
        partner.append(hits[0])

    real = []
    pairs = []
    seen = set()
    for i in range(d):
        if i in seen:
            continue
        j = partner[i]
        if j == i:
            lo = pts[i][0] - radii[i]
            hi = pts[i][0] + radii[i]
            real.append((lo, hi))
            seen.add(i)
        else:
            if partner[j] != i:
                raise _RetryPrecision("asymmetric conjugation pairing")
            rep = i if pts[i][1] > 0 else j
            re, im = pts[rep]
            r = radii[rep]
            pairs.append(((re - r, re + r), (im - r, im + r)))
            seen.update((i, j))
    real.sort(key=lambda iv: iv[0])
    pairs.sort(key=lambda bx: (bx[0][0], bx[1][0]))
    return RootEnclosures(real, pairs)


# ---------------------------------------------------------------------------
# Gram matrix of the Hermitian trace form on a basis.

def gram_enclosure(basis_rows, roots: RootEnclosures):
    """Enclosure of the Gram matrix G_ij = sum_s s(w_i) * conj(s(w_j)).

    ``basis_rows`` hold polynomial coefficients of each basis element
    over the power basis (Fractions).  Returns (lo, hi) matrices of
    Fractions.  Real embeddings contribute v_i * v_j; each conjugate
    pair contributes 2 * (Re_i * Re_j + Im_i * Im_j).
    """
    d = len(basis_rows)
    real_vals = [[poly_eval_interval(row, iv) for row in basis_rows]
                 for iv in roots.real]
    cplx_vals = [[poly_eval_box(row, bx) for row in basis_rows]
                 for bx in roots.complex_pairs]
    lo = [[Fraction(0)] * d for _ in range(d)]
    hi = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            acc = ival(0)
            for vals in real_vals:
                acc = iadd(acc, imul(vals[i], vals[j]))
            for vals in cplx_vals:
                (re_i, im_i), (re_j, im_j) = vals[i], vals[j]
                term = iadd(imul(re_i, re_j), imul(im_i, im_j))
                acc = iadd(acc, (2 * term[0], 2 * term[1]))
            lo[i][j] = lo[j][i] = acc[0]
            hi[i][j] = hi[j][i] = acc[1]
    return lo, hi


def gram_congruence(transform, lo, hi):
    """Enclosure of T * G * T^T for an integer matrix T acting on rows."""
    d = len(lo)
    n = len(transform)
    out_lo = [[Fraction(0)] * n for _ in range(n)]
    out_hi = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc_lo = Fraction(0)
            acc_hi = Fraction(0)
            for k in range(d):
                tik = transform[i][k]
                if not tik:
                    continue
                for l in range(d):
                    c = tik * transform[j][l]
                    if not c:
                        continue
                    if c > 0:
                        acc_lo += c * lo[k][l]
                        acc_hi += c * hi[k][l]
                    else:
                        acc_lo += c * hi[k][l]
                        acc_hi += c * lo[k][l]
            out_lo[i][j] = out_lo[j][i] = acc_lo
            out_hi[i][j] = out_hi[j][i] = acc_hi
    return out_lo, out_hi
