"""Pseudo-matrices over an order and their Hermite normal form.

A module M inside K^n is presented by a pseudo-matrix: an n x n matrix
over K together with one fractional coefficient ideal per row, with
M = sum_i ideal_i * row_i.  The main pipeline computes a triangular
pseudo-basis in three stages:

1. ``determinantal_ideal`` -- det(A) * prod(ideals), with det(A)
   recovered exactly from a single division-free determinant over the
   residue ring O/pO for a prime p above a Hadamard-style bound.
2. ``hnf_modular`` -- column elimination working modulo that ideal,
   where every row is renormalized to an integral coefficient ideal of
   field-bounded norm and reduced modulo the running modulus, which is
   what keeps all coefficient sizes polynomial.
3. ``euclidean_reconstruct`` -- recovers the exact triangular
   pseudo-basis of M from the modular result.

``hnf_naive`` implements the same elimination without any modular
reduction or normalization; it grows coefficients freely and exists as
an independent cross-check.  ``module_contains`` / ``modules_equal``
decide module membership and equality exactly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import reduce
from math import isqrt

import sympy

from .errors import (
    NonIntegralEntriesError,
    NonIntegralModuleError,
    SingularError,
    SingularModulusError,
    ValidationError,
    ZeroDeterminantError,
)
from .field import FieldElement, NumberField
from .ideals import FractionalIdeal, normalize_row, pivot_uv, reduce_mod_ideal


class PseudoMatrix:
    """Square pseudo-matrix: entries over K plus one ideal per row."""

    __slots__ = ("field", "entries", "ideals")

    def __init__(self, field, entries, ideals):
        entries = tuple(tuple(row) for row in entries)
        ideals = tuple(ideals)
        n = len(entries)
        if n == 0 or any(len(row) != n for row in entries):
            raise ValidationError("pseudo-matrix must be square and nonempty")
        if len(ideals) != n:
            raise ValidationError("one coefficient ideal per row required")
        self.field = field
        self.entries = entries
        self.ideals = ideals

    @property
    def n(self):
        return len(self.entries)

    def row(self, i):
        return self.entries[i]

    def is_integral(self) -> bool:
        """True when ideal_i * a_ij lies in O for every entry."""
        for ideal, row in zip(self.ideals, self.entries):
            for gamma_coords in ideal.mat:
                gamma = FieldElement(self.field, gamma_coords, ideal.den)
                for a in row:
                    if not a.is_zero() and (gamma * a).den != 1:
                        return False
        return True

    def __repr__(self):
        return f"PseudoMatrix(n={self.n})"


@dataclass
class RunStats:
    """Observational size telemetry for one pipeline run.

    ``max_elt_size`` is the largest element size seen right after a
    modular reduction, ``worst_ratio`` that size divided by the run's
    bound term  d^2 + d*log2|disc| + S(modulus)/d^2.  Counts accumulate
    one per normalization call and one per reduced entry.
    """

    max_elt_size: float = 0.0
    max_ideal_size: float = 0.0
    normalizations: int = 0
    reductions: int = 0
    worst_ratio: float = 0.0
    bound_term: float = 0.0

    def note_ideal(self, ideal):
        s = ideal.size()
        if s > self.max_ideal_size:
            self.max_ideal_size = s

    def note_reduced(self, elt):
        self.reductions += 1
        s = elt.size()
        if s > self.max_elt_size:
            self.max_elt_size = s
        if self.bound_term > 0:
            ratio = s / self.bound_term
            if ratio > self.worst_ratio:
                self.worst_ratio = ratio

    def as_dict(self):
        return {
            "max_elt_size": self.max_elt_size,
            "max_ideal_size": self.max_ideal_size,
            "normalizations": self.normalizations,
            "reductions": self.reductions,
            "worst_ratio": self.worst_ratio,
            "bound_term": self.bound_term,
        }


@dataclass(frozen=True)
class HnfResult:
    """Triangular pseudo-basis: unit diagonal, zeros above, integral ideals."""

    matrix: tuple
    ideals: tuple
    det_ideal: FractionalIdeal

    def to_pseudo_matrix(self, fld) -> PseudoMatrix:
        return PseudoMatrix(fld, self.matrix, self.ideals)


@dataclass(frozen=True)
class DetStrategy:
    """Knobs for the modular determinant.

    allow_scaling: clear denominators of non-integral entries (the
        determinant is rescaled back afterwards); when False such input
        raises NonIntegralEntriesError.
    margin_bits: extra headroom added on top of the proven prime bound.
    """

    allow_scaling: bool = True
    margin_bits: int = 0


# ---------------------------------------------------------------------------
# Division-free determinant over the residue ring O/pO.

def _berkowitz_vector(mat, ring_mul, ring_add, ring_neg, one, k):
    """Characteristic polynomial coefficients via Toeplitz products.

    Only ring additions and multiplications are used, so this works over
    any commutative ring -- in particular over O/pO, which has zero
    divisors and no useful division.
    """
    if k == 1:
        return [one, ring_neg(mat[0][0])]
    a = mat[0][0]
    row = mat[0][1:]
    col = [mat[i][0] for i in range(1, k)]
    sub = [r[1:] for r in mat[1:]]

    items = [col]
    for _ in range(k - 2):
        prev = items[-1]
        items.append([
            reduce(ring_add, (ring_mul(sub[i][j], prev[j]) for j in range(k - 1)))
            for i in range(k - 1)
        ])
    diag_scalars = [
        reduce(ring_add, (ring_mul(row[j], item[j]) for j in range(k - 1)))
        for item in items
    ]
    t_col = [one, ring_neg(a)] + [ring_neg(s) for s in diag_scalars]
    prev_vec = _berkowitz_vector(sub, ring_mul, ring_add, ring_neg, one, k - 1)
    out = []
    for i in range(k + 1):
        terms = [ring_mul(t_col[i - j], prev_vec[j])
                 for j in range(max(0, i - len(t_col) + 1), min(i, k - 1) + 1)]
        out.append(reduce(ring_add, terms))
    return out


def berkowitz_det(mat, ring_mul, ring_add, ring_neg, one):
    """Division-free determinant of a square matrix over a commutative ring."""
    k = len(mat)
    vec = _berkowitz_vector(mat, ring_mul, ring_add, ring_neg, one, k)
    det = vec[-1]
    return det if k % 2 == 0 else ring_neg(det)


def det_mod_p(fld: NumberField, entries, p: int) -> FieldElement:
    """Determinant of an integral matrix over O/pO, coordinates in [0, p)."""
    d = fld.degree
    table = fld.mult_table

    def mul(x, y):
        out = [0] * d
        for i, xi in enumerate(x):
            if not xi:
                continue
            ti = table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                row = ti[j]
                for k in range(d):
                    if row[k]:
                        out[k] += c * row[k]
        return tuple(v % p for v in out)

    def add(x, y):
        return tuple((a + b) % p for a, b in zip(x, y))

    def neg(x):
        return tuple((-a) % p for a in x)

    one = tuple([1] + [0] * (d - 1))
    mat = [[tuple(c % p for c in e.coords) for e in row] for row in entries]
    if len(mat) == 0:
        return fld.one
    det = berkowitz_det(mat, mul, add, neg, one)
    return FieldElement(fld, det, 1)


def _ceil_sqrt(n: int) -> int:
    s = isqrt(n)
    return s if s * s == n else s + 1


def _miller_rabin_rounds(n: int, rounds: int) -> bool:
    if n < 2:
        return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    rng = random.Random(n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime_at_least(n: int) -> int:
    """Smallest prime >= n; certified deterministically below 2^64 and by
    sympy's strong tests plus 64 fixed-seed Miller-Rabin rounds beyond."""
    candidate = sympy.nextprime(n - 1)
    while candidate >= 1 << 64 and not _miller_rabin_rounds(candidate, 64):
        candidate = sympy.nextprime(candidate)
    return int(candidate)


def _det_prime_bound(fld: NumberField, entries, margin_bits: int) -> int:
    """Prime large enough that det coordinates lift uniquely from (p)."""
    d = fld.degree
    n = len(entries)
    coeff_max = 1
    for row in entries:
        for e in row:
            m = max((abs(c) for c in e.coords), default=0)
            if m > coeff_max:
                coeff_max = m
    # Per-embedding bound on entries, then Hadamard over the n columns,
    # then embedding-vector length, then the coordinate magnification of
    # an LLL-reduced basis.  Every factor is rounded up in integers.
    emb_entry = (coeff_max
                 * _ceil_sqrt(d ** 3)
                 * (1 << ((d * d + 1) // 2))
                 * _ceil_sqrt(abs(fld.disc)))
    hadamard = emb_entry ** n * _ceil_sqrt(n ** n)
    t2_len = _ceil_sqrt(d) * hadamard
    coord_bound = (1 << ((3 * d + 1) // 2)) * t2_len
    return (2 * coord_bound + 1) << margin_bits


def field_det_modular(fld: NumberField, entries,
                      margin_bits: int = 0) -> FieldElement:
    """Exact determinant of an integral matrix via one big-prime residue."""
    p = next_prime_at_least(_det_prime_bound(fld, entries, margin_bits))
    residue = det_mod_p(fld, entries, p)
    half = p // 2
    lifted = tuple(c - p if c > half else c for c in residue.coords)
    return FieldElement(fld, lifted, 1)


def det_cofactor(fld: NumberField, entries) -> FieldElement:
    """Exact determinant by Laplace expansion over K (test oracle)."""
    n = len(entries)
    cache = {}

    def minor(rows, cols):
        if not cols:
            return fld.one
        key = (rows[0], cols)
        if key in cache:
            return cache[key]
        acc = fld.zero
        sign = 1
        for idx, c in enumerate(cols):
            e = entries[rows[0]][c]
            if not e.is_zero():
                term = e * minor(rows[1:], cols[:idx] + cols[idx + 1:])
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
        cache[key] = acc
        return acc

    return minor(tuple(range(n)), tuple(range(n)))


def determinantal_ideal(pm: PseudoMatrix,
                        strategy: DetStrategy | None = None) -> FractionalIdeal:
    """det(A) times the product of the coefficient ideals.

    Entries with denominators are scaled integral first and the
    determinant is rescaled by 1/k^n afterwards (unless the strategy
    forbids it).  Raises ZeroDeterminantError on singular input.
    """
    strategy = strategy or DetStrategy()
    fld = pm.field
    n = pm.n
    k = 1
    for row in pm.entries:
        for e in row:
            k = k * e.den // math.gcd(k, e.den)
    if k != 1 and not strategy.allow_scaling:
        raise NonIntegralEntriesError("matrix entries have denominators")
    if all(pm.entries[i][j].is_zero()
           for i in range(n) for j in range(i + 1, n)):
        # Triangular input: the determinant is the diagonal product, so
        # no residue computation (or prime search) is needed.  This is
        # the common case when re-deriving the ideal of an HNF output.
        det = reduce(lambda a, e: a * e, (pm.entries[i][i] for i in range(n)),
                     fld.one)
    else:
        entries = pm.entries
        if k != 1:
            entries = tuple(tuple(e * k for e in row) for row in entries)
        det = field_det_modular(fld, entries, strategy.margin_bits)
        if k != 1:
            det = det / k ** n
    if det.is_zero():
        raise ZeroDeterminantError("pseudo-matrix is singular")
    g = reduce(lambda a, b: a * b, pm.ideals)
    return g * det


# ---------------------------------------------------------------------------
# The modular HNF and its reconstruction.

def hnf_modular(pm: PseudoMatrix, g: FractionalIdeal,
                stats: RunStats | None = None):
    """Triangularize a pseudo-matrix working modulo the ideal ``g``.

    ``g`` must be a nonzero integral multiple of the determinantal ideal
    of the module, and the module itself must sit inside O^n.  Columns
    are processed right to left; each elimination uses the exact
    two-row pseudo-transform (the pivot entry becomes 1), then the
    eliminated row is renormalized and both rows are reduced modulo
    g * ideal^-1.  Entries that are annihilated modulo g simply become
    zero -- the reconstruction step recovers them from g.

    Returns (PseudoMatrix, RunStats).  The output matrix is lower
    triangular; every diagonal entry is 1 except for rows whose pivot
    vanished modulo g, which are 0.
    """
    fld = pm.field
    n = pm.n
    if not g.is_integral():
        raise ValidationError("modulus ideal must be integral")
    if not pm.is_integral():
        raise NonIntegralModuleError("module is not contained in O^n")
    if stats is None:
        stats = RunStats()
    d = fld.degree
    stats.bound_term = (d * d + d * math.log2(abs(fld.disc))
                        + g.size() / (d * d))

    rows = [list(r) for r in pm.entries]
    ideals = list(pm.ideals)

    def renormalize(i):
        if all(x.is_zero() for x in rows[i]):
            # Exact (not modular) vanishing of a row: rank-deficient input.
            raise SingularModulusError(f"row {i + 1} vanished during elimination")
        res = normalize_row(ideals[i], rows[i])
        ideals[i] = res.ideal
        rows[i] = list(res.row)
        stats.normalizations += 1
        stats.note_ideal(ideals[i])

    def reduce_row(i):
        modulus = g * ideals[i].inverse()
        row = rows[i]
        for kk in range(n):
            if not row[kk].is_zero():
                row[kk] = reduce_mod_ideal(row[kk], modulus)
                stats.note_reduced(row[kk])

    for i in range(n):
        renormalize(i)

    for j in range(n - 1, -1, -1):
        if rows[j][j].is_zero():
            for i in range(j - 1, -1, -1):
                if not rows[i][j].is_zero():
                    rows[i], rows[j] = rows[j], rows[i]
                    ideals[i], ideals[j] = ideals[j], ideals[i]
                    break
            # No swap candidate means the column vanished modulo g; the
            # reconstruction recovers the pivot from g itself.
        for i in range(j - 1, -1, -1):
            if rows[i][j].is_zero():
                continue
            b_ij = rows[i][j]
            b_jj = rows[j][j]
            si = ideals[i] * b_ij
            sj = ideals[j] * b_jj
            dd = si + sj
            u, v = pivot_uv(b_ij, ideals[i], b_jj, ideals[j], dd)
            new_row_i = [b_jj * x - b_ij * y for x, y in zip(rows[i], rows[j])]
            new_row_j = [u * x + v * y for x, y in zip(rows[i], rows[j])]
            new_ideal_i = ideals[i] * ideals[j] * dd.inverse()
            rows[j] = new_row_j
            ideals[j] = dd
            stats.note_ideal(dd)
            rows[i] = new_row_i
            ideals[i] = new_ideal_i
            renormalize(i)
            reduce_row(i)
            reduce_row(j)
            assert ideals[i].is_integral() and ideals[j].is_integral()
        pivot = rows[j][j]
        if not pivot.is_zero() and not pivot.is_one():
            # Untouched pivot: move its content into the ideal so the
            # diagonal is 1, exactly as an elimination would have done.
            ideals[j] = ideals[j] * pivot
            inv = pivot.inverse()
            rows[j] = [x * inv for x in rows[j]]
            stats.note_ideal(ideals[j])
            reduce_row(j)
            assert ideals[j].is_integral()

    return PseudoMatrix(fld, rows, ideals), stats


def euclidean_reconstruct(b: PseudoMatrix, g: FractionalIdeal,
                          stats: RunStats | None = None) -> HnfResult:
    """Recover the exact triangular pseudo-basis from the modular one.

    Walking rows bottom-up with the running modulus g_j, the true
    coefficient ideal is c_j = b_jj * ideal_j + g_j; splitting
    1 = u * b_jj + v with u in ideal_j * c_j^-1 and v in g_j * c_j^-1
    rebuilds the row as u * row_j + v * e_j, whose diagonal entry is
    exactly 1.  Off-diagonal entries are reduced modulo g_j * c_j^-1.
    """
    fld = b.field
    n = b.n
    if stats is None:
        stats = RunStats()
    rows = [list(r) for r in b.entries]
    out_rows = [None] * n
    out_ideals = [None] * n
    g_cur = g
    for j in range(n - 1, -1, -1):
        b_jj = rows[j][j]
        if b_jj.is_zero():
            c_j = g_cur
        else:
            c_j = b.ideals[j] * b_jj + g_cur
        u, v = pivot_uv(b_jj, b.ideals[j], fld.one, g_cur, c_j)
        new_row = [u * x for x in rows[j]]
        new_row[j] = new_row[j] + v
        next_modulus = g_cur * c_j.inverse()
        for k in range(j):
            if not new_row[k].is_zero():
                new_row[k] = reduce_mod_ideal(new_row[k], next_modulus)
                stats.note_reduced(new_row[k])
        assert new_row[j].is_one()
        assert c_j.is_integral()
        out_rows[j] = tuple(new_row)
        out_ideals[j] = c_j
        g_cur = next_modulus
    det = reduce(lambda a, c: a * c, out_ideals)
    return HnfResult(matrix=tuple(out_rows), ideals=tuple(out_ideals),
                     det_ideal=det)


def hnf_pipeline(pm: PseudoMatrix, modulus: FractionalIdeal | None = None,
                 strategy: DetStrategy | None = None):
    """Full pipeline: determinantal ideal, modular HNF, reconstruction.

    Returns (HnfResult, RunStats).  ``modulus`` overrides the computed
    determinantal ideal (it must be an integral multiple of it).
    """
    g = modulus if modulus is not None else determinantal_ideal(pm, strategy)
    stats = RunStats()
    reduced, stats = hnf_modular(pm, g, stats)
    result = euclidean_reconstruct(reduced, g, stats)
    return result, stats


def hnf_naive(pm: PseudoMatrix) -> HnfResult:
    """Pseudo-HNF by plain elimination: no modulus, no renormalization.

    Coefficient growth is unchecked during the sweep (exponential in the
    worst case), so this is only suitable as a desk-scale verification
    oracle.  A final pass performs the classical canonical reductions:
    each below-diagonal entry is shrunk by subtracting a multiple of a
    finished pivot row with coefficient in ideal_j * ideal_i^-1, which
    leaves the module untouched but keeps the output comparable at
    reasonable cost.
    """
    fld = pm.field
    n = pm.n
    rows = [list(r) for r in pm.entries]
    ideals = list(pm.ideals)
    for j in range(n - 1, -1, -1):
        if rows[j][j].is_zero():
            for i in range(j - 1, -1, -1):
                if not rows[i][j].is_zero():
                    rows[i], rows[j] = rows[j], rows[i]
                    ideals[i], ideals[j] = ideals[j], ideals[i]
                    break
            else:
                raise SingularError("pseudo-matrix is not of full rank")
        for i in range(j - 1, -1, -1):
            if rows[i][j].is_zero():
                continue
            b_ij = rows[i][j]
            b_jj = rows[j][j]
            si = ideals[i] * b_ij
            sj = ideals[j] * b_jj
            dd = si + sj
            u, v = pivot_uv(b_ij, ideals[i], b_jj, ideals[j], dd)
            rows[i], rows[j] = (
                [b_jj * x - b_ij * y for x, y in zip(rows[i], rows[j])],
                [u * x + v * y for x, y in zip(rows[i], rows[j])],
            )
            ideals[i], ideals[j] = ideals[i] * ideals[j] * dd.inverse(), dd
        pivot = rows[j][j]
        if pivot.is_zero():
            raise SingularError("pseudo-matrix is not of full rank")
        if not pivot.is_one():
            ideals[j] = ideals[j] * pivot
            inv = pivot.inverse()
            rows[j] = [x * inv for x in rows[j]]
    for i in range(1, n):
        for j in range(i - 1, -1, -1):
            w = rows[i][j]
            if w.is_zero():
                continue
            reduced = reduce_mod_ideal(w, ideals[j] * ideals[i].inverse())
            lam = w - reduced
            if not lam.is_zero():
                rows[i] = [x - lam * y for x, y in zip(rows[i], rows[j])]
    det = reduce(lambda a, c: a * c, ideals)
    return HnfResult(matrix=tuple(tuple(r) for r in rows),
                     ideals=tuple(ideals), det_ideal=det)


# ---------------------------------------------------------------------------
# Module verification.

def _solve_over_field(fld, mat, target):
    """Solve x * mat = target over K by Gaussian elimination."""
    n = len(mat)
    aug = [[mat[i][j] for i in range(n)] + [target[j]] for j in range(n)]
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, n):
            if not aug[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            raise SingularError("pseudo-matrix is not of full rank")
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = aug[r][c].inverse()
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n):
            if i != r and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
    return [aug[c][n] for c in range(n)]


def _ideal_subset(a: FractionalIdeal, b: FractionalIdeal) -> bool:
    fld = a.field
    return all(b.contains(FieldElement(fld, row, a.den)) for row in a.mat)


def module_contains(pm: PseudoMatrix, ideal: FractionalIdeal, vec) -> bool:
    """Exact test of ideal * vec inside the module of ``pm``.

    Solves x * A = vec over K; the pseudo-generator lies inside iff
    x_i * ideal is contained in the i-th coefficient ideal for every i.
    """
    fld = pm.field
    vec = tuple(vec)
    x = _solve_over_field(fld, pm.entries, vec)
    for xi, ai in zip(x, pm.ideals):
        if xi.is_zero():
            continue
        if not _ideal_subset(ideal * xi, ai):
            return False
    return True


def modules_equal(a: PseudoMatrix, b: PseudoMatrix) -> bool:
    """Exact equality of the modules spanned by two pseudo-matrices.

    Containment one way plus equality of determinantal ideals forces
    equality, so only one direction of generator membership is checked.
    """
    try:
        ga = determinantal_ideal(a)
        gb = determinantal_ideal(b)
    except ZeroDeterminantError as err:
        raise SingularError(str(err)) from err
    if ga != gb:
        return False
    return all(module_contains(a, b.ideals[i], b.row(i)) for i in range(b.n))
