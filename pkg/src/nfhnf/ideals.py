"""Fractional ideals in HNF representation, and the row-level operations
built on them: LLL-reduced ideal bases, reduction of a field element
modulo an ideal, normalization of a one-dimensional module to an
integral coefficient ideal of field-bounded norm, coprime splitting, and
ideal CRT.

A fractional ideal is stored as a positive denominator ``den`` plus a
d x d integer matrix ``mat`` in canonical lower-triangular row HNF whose
rows are a Z-basis of ``den * ideal`` in basis coordinates.  The
denominator is minimal and closure under multiplication by the ring
basis is certified whenever an ideal is built, so every stored value is
a genuine O_K-module and equal ideals compare equal structurally.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import (
    InconsistentIdealError,
    NotCoprimeError,
    ValidationError,
    ZeroElementError,
    ZeroIdealError,
    ZeroRowError,
)
from .field import FieldElement
from .linalg import (
    hnf_int,
    hnf_int_lower,
    lll_reduce,
    mat_vec,
    nullspace_int,
    solve_rational,
)


class FractionalIdeal:
    __slots__ = ("field", "den", "mat", "norm", "_lll", "_inv")

    def __init__(self, field, den, mat, _norm=None):
        # Internal: expects canonical data.  Use the classmethods below.
        self.field = field
        self.den = den
        self.mat = mat
        d = field.degree
        if _norm is None:
            det = 1
            for i in range(d):
                det *= mat[i][i]
            _norm = Fraction(det, den ** d)
        self.norm = _norm
        self._lll = None
        self._inv = None

    # -- constructors --------------------------------------------------------
    @classmethod
    def from_rows(cls, field, rows, den=1, certify=True):
        """Canonical ideal from generating rows of ``den * ideal``."""
        d = field.degree
        h, _ = hnf_int_lower([list(r) for r in rows])
        mat = [row for row in h if any(row)]
        if len(mat) != d:
            raise ZeroIdealError("lattice has deficient rank")
        content = 0
        for row in mat:
            for x in row:
                content = math.gcd(content, x)
        g = math.gcd(den, content)
        if g > 1:
            den //= g
            mat = [[x // g for x in row] for row in mat]
        for i in range(d):
            if mat[i][i] <= 0:
                raise ZeroIdealError("lattice has deficient rank")
        mat = tuple(tuple(row) for row in mat)
        cached = field._ideal_cache.get((den, mat))
        if cached is not None:
            return cached
        ideal = cls(field, den, mat)
        if certify:
            ideal._certify_module()
        field._ideal_cache[(den, mat)] = ideal
        return ideal

    @classmethod
    def from_generators(cls, field, gens):
        """Smallest fractional ideal containing the given elements."""
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            raise ZeroIdealError("no nonzero generators")
        d = field.degree
        prods = []
        for g in gens:
            for i in range(1, d + 1):
                prods.append(g * field.omega(i))
        den = 1
        for p in prods:
            den = den * p.den // math.gcd(den, p.den)
        rows = [[c * (den // p.den) for c in p.coords] for p in prods]
        return cls.from_rows(field, rows, den)

    @classmethod
    def unit_ideal(cls, field):
        d = field.degree
        mat = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
        cached = field._ideal_cache.get((1, mat))
        if cached is not None:
            return cached
        ideal = cls(field, 1, mat)
        field._ideal_cache[(1, mat)] = ideal
        return ideal

    @classmethod
    def from_den_mat(cls, field, den, mat):
        """Validated constructor for external data (canonical form required)."""
        d = field.degree
        if den <= 0:
            raise ValidationError("ideal denominator must be positive")
        if len(mat) != d or any(len(row) != d for row in mat):
            raise ValidationError("ideal matrix must be square of the degree")
        rebuilt = cls.from_rows(field, mat, den)
        if rebuilt.den != den or rebuilt.mat != tuple(tuple(r) for r in mat):
            raise ValidationError(
                "ideal matrix is not in canonical HNF with minimal denominator")
        return rebuilt

    # -- certification ---------------------------------------------------------
    def _certify_module(self):
        """Check closure of the lattice under multiplication by the basis."""
        field = self.field
        d = field.degree
        for row in self.mat:
            gamma = FieldElement(field, row, 1)
            for i in range(2, d + 1):
                prod = gamma * field.omega(i)
                if prod.den != 1 or self._lattice_coords(prod.coords) is None:
                    raise ValidationError(
                        "lattice is not stable under the ring action")

    def _lattice_coords(self, coords):
        """Integer coordinates of ``coords`` over the rows of mat, or None."""
        mat = self.mat
        d = self.field.degree
        w = list(coords)
        out = [0] * d
        for i in range(d - 1, -1, -1):
            q, r = divmod(w[i], mat[i][i])
            if r:
                return None
            if q:
                out[i] = q
                row = mat[i]
                for k in range(i + 1):
                    w[k] -= q * row[k]
        if any(w):
            return None
        return out

    # -- predicates ------------------------------------------------------------
    def is_integral(self):
        return self.den == 1

    def is_unit_ideal(self):
        return self.den == 1 and self.norm == 1

    def contains(self, x: FieldElement) -> bool:
        v = x * self.den
        if v.den != 1:
            return False
        return self._lattice_coords(v.coords) is not None

    # -- arithmetic --------------------------------------------------------------
    def __add__(self, other):
        self._check(other)
        den = self.den * other.den // math.gcd(self.den, other.den)
        sa = den // self.den
        sb = den // other.den
        rows = [[x * sa for x in row] for row in self.mat]
        rows += [[x * sb for x in row] for row in other.mat]
        return FractionalIdeal.from_rows(self.field, rows, den)

    def __mul__(self, other):
        if isinstance(other, FractionalIdeal):
            self._check(other)
            rows = []
            field = self.field
            for ra in self.mat:
                ga = FieldElement(field, ra, 1)
                for rb in other.mat:
                    prod = ga * FieldElement(field, rb, 1)
                    rows.append(prod.coords)
            return FractionalIdeal.from_rows(
                field, rows, self.den * other.den)
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if isinstance(other, FieldElement):
            if other.is_zero():
                raise ZeroElementError("ideal times zero element")
            field = self.field
            num = FieldElement(field, other.coords, 1)
            rows = [(num * FieldElement(field, row, 1)).coords
                    for row in self.mat]
            return FractionalIdeal.from_rows(
                field, rows, self.den * other.den)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> FractionalIdeal:
        """Exact ideal inverse: self * self.inverse() is the unit ideal."""
        if self._inv is not None:
            return self._inv
        field = self.field
        d = field.degree
        n_int = 1
        for i in range(d):
            n_int *= self.mat[i][i]  # norm of the integral part
        # y is in N * (den*self)^-1  iff  y * gamma_j = 0 mod N for all j.
        t_rows = []
        for i in range(d):
            omega_i = field.omega(i + 1)
            row = []
            for j in range(d):
                prod = omega_i * FieldElement(field, self.mat[j], 1)
                row.extend(prod.coords)
            t_rows.append(row)
        dd = d * d
        stack = t_rows + [[n_int if k == idx else 0 for k in range(dd)]
                          for idx in range(dd)]
        kernel = nullspace_int(stack)
        rows = [r[:d] for r in kernel if any(r[:d])]
        inv = FractionalIdeal.from_rows(field, [[x * self.den for x in row]
                                                for row in rows], n_int)
        inv._inv = self
        self._inv = inv
        return inv

    def _check(self, other):
        if self.field is not other.field and self.field != other.field:
            raise ValueError("ideals over different fields")

    # -- reduced bases ---------------------------------------------------------
    def lll_basis(self):
        """Z-basis of the ideal, LLL-reduced under the embedding geometry.

        The first vector is sign-normalized: its leading nonzero
        coordinate is positive.  Cached (ideals are immutable).
        """
        if self._lll is None:
            field = self.field
            reduced, _ = lll_reduce(
                [list(r) for r in self.mat], field.gram_lll, field.lll_delta)
            first = reduced[0]
            for c in first:
                if c:
                    if c < 0:
                        reduced[0] = [-x for x in first]
                    break
            self._lll = tuple(FieldElement(field, tuple(row), self.den)
                              for row in reduced)
        return self._lll

    # -- invariants --------------------------------------------------------------
    def size(self) -> float:
        """Bit-size measure: log2(den) + d^2 * log2(norm of den*self)."""
        det = self.norm * Fraction(self.den) ** self.field.degree
        return math.log2(self.den) + self.field.degree ** 2 * (
            math.log2(det.numerator) - math.log2(det.denominator))

    def __eq__(self, other):
        return (isinstance(other, FractionalIdeal)
                and (self.field is other.field or self.field == other.field)
                and self.den == other.den and self.mat == other.mat)

    def __hash__(self):
        return hash((self.den, self.mat))

    def __repr__(self):
        return f"FractionalIdeal(den={self.den}, mat={[list(r) for r in self.mat]})"


@dataclass(frozen=True)
class NormalizedPseudoElement:
    """Output of row normalization: integral ideal of bounded norm."""

    ideal: FractionalIdeal
    row: tuple


@dataclass
class OperationAudit:
    """Collects outputs of normalize/reduce calls for bound verification.

    ``normalized`` holds every ideal produced by normalize_row;
    ``reduced`` holds (result, modulus ideal) for every call of
    reduce_mod_ideal that actually took the reduction path (the early
    returns carry no guarantee beyond what the input already had).
    """

    normalized: list = dc_field(default_factory=list)
    reduced: list = dc_field(default_factory=list)


_AUDIT: OperationAudit | None = None


@contextmanager
def audit_operations():
    """Context manager recording normalize/reduce outputs (test harness).

    Not thread-safe; intended for single-threaded verification runs.
    """
    global _AUDIT
    prev = _AUDIT
    _AUDIT = audit = OperationAudit()
    try:
        yield audit
    finally:
        _AUDIT = prev


# ---------------------------------------------------------------------------
# Row-level operations.

def reduce_mod_ideal(x: FieldElement, a: FractionalIdeal) -> FieldElement:
    """Reduce ``x`` modulo the ideal ``a``.

    Returns x unchanged when its certified embedding length is already
    below d^(3/2) * 2^(d/2) * N(a)^(1/d) * sqrt|disc| or when x == 1
    (pivot entries must survive reduction verbatim).  Otherwise
    decomposes x over an LLL-reduced basis (r_i) of ``a`` and subtracts
    the nearest lattice vector, rounding half to even; the difference
    x - result is then an exact element of ``a`` and the result obeys
    the same length bound.
    """
    if x.is_one() or _below_reduction_threshold(x, a):
        return x
    basis = a.lll_basis()
    rows = [[Fraction(c, b.den) for c in b.coords] for b in basis]
    target = [Fraction(c, x.den) for c in x.coords]
    y = solve_rational(rows, target)
    assert y is not None
    out = x
    for yi, bi in zip(y, basis):
        q = round(yi)
        if q:
            out = out - q * bi
    if _AUDIT is not None:
        _AUDIT.reduced.append((out, a))
    return out


def _below_reduction_threshold(x: FieldElement, a: FractionalIdeal) -> bool:
    # Compare ||x||^2d against the 2d-th power of the bound; everything
    # is rational so the comparison is exact.  A false "too big" verdict
    # merely triggers one harmless extra reduction, so huge elements are
    # dispatched by a cheap floating-point overestimate and only the
    # certified "small enough" verdict pays for exact arithmetic.
    fld = x.field
    d = fld.degree
    m = max((abs(c) for c in x.coords), default=0)
    if m == 0:
        return True
    log_upper_est = (2 * math.log2(m) + 2 * math.log2(d)
                     + fld._log2_gram_hi_max - 2 * math.log2(x.den))
    log_bound = (math.log2(d ** 3 * 2 ** d * abs(fld.disc))
                 + 2 * (math.log2(a.norm.numerator)
                        - math.log2(a.norm.denominator)) / d)
    if log_upper_est > log_bound:
        return False
    upper = x.t2_sq_upper()
    if upper <= 0:
        return True
    bound = (Fraction(d ** 3 * 2 ** d * abs(fld.disc)) ** d) * a.norm ** 2
    return upper ** d <= bound


def normalize_row(a: FractionalIdeal, row) -> NormalizedPseudoElement:
    """Rewrite the one-dimensional module a * row with an integral
    coefficient ideal whose norm is bounded by 2^(d^2/2) * sqrt|disc|.

    Steps: clear the denominator of ``a``; invert; extract the
    denominator k of the inverse; pick the first vector alpha of an
    LLL-reduced basis of k * a^-1; return ((alpha/k) * a, (k/alpha) * row).
    The module is unchanged: (alpha/k)a * (k/alpha)row = a * row.
    """
    row = tuple(row)
    if all(x.is_zero() for x in row):
        raise ZeroRowError("cannot normalize a zero row")
    k0 = a.den
    if k0 != 1:
        a = a * k0
        row = tuple(x / k0 for x in row)
    a_inv = a.inverse()
    k = a_inv.den
    b = a_inv * k if k != 1 else a_inv
    alpha = b.lll_basis()[0]
    new_ideal = a * (alpha / k)
    assert new_ideal.is_integral()
    factor = alpha.inverse() * k
    new_row = tuple(x * factor for x in row)
    if _AUDIT is not None:
        _AUDIT.normalized.append(new_ideal)
    return NormalizedPseudoElement(ideal=new_ideal, row=new_row)


def split_one(a: FractionalIdeal, b: FractionalIdeal):
    """For coprime integral ideals, elements u in a, v in b with u + v = 1.

    Works from the HNF transform of the stacked basis matrices; raises
    NotCoprimeError when a + b is not the full ring.  The pair is
    size-reduced modulo a*b before returning -- shifting u by an element
    of the intersection keeps both memberships and the identity, and
    small pairs are what keeps downstream eliminations from compounding
    coefficient growth.
    """
    if not (a.is_integral() and b.is_integral()):
        raise ValidationError("split requires integral ideals")
    a._check(b)
    field = a.field
    d = field.degree
    stacked = [list(r) for r in a.mat] + [list(r) for r in b.mat]
    h, u = hnf_int(stacked)
    if any(h[i][j] != int(i == j) for i in range(d) for j in range(d)):
        raise NotCoprimeError("ideals are not coprime")
    coeffs = u[0]
    u_elt = FieldElement(field, tuple(mat_vec(coeffs[:d], [list(r) for r in a.mat])), 1)
    u_elt = reduce_mod_ideal(u_elt, a * b)
    v_elt = field.one - u_elt
    assert a.contains(u_elt) and b.contains(v_elt)
    return u_elt, v_elt


def pivot_uv(b_ij: FieldElement, bi: FractionalIdeal,
             b_jj: FieldElement, bj: FractionalIdeal,
             dd: FractionalIdeal):
    """Solve b_ij * u + b_jj * v = 1 with u in bi * dd^-1, v in bj * dd^-1,
    where dd = b_ij * bi + b_jj * bj.

    Zero entries take the forced degenerate solution without any HNF
    work; otherwise the problem reduces to splitting 1 over the coprime
    integral ideals (b_ij * bi) * dd^-1 and (b_jj * bj) * dd^-1.
    """
    field = bi.field
    if b_ij.is_zero() and b_jj.is_zero():
        raise ValidationError("both pivot entries are zero")
    if b_ij.is_zero():
        if dd != bj * b_jj:
            raise InconsistentIdealError("gcd ideal does not match its parts")
        return field.zero, b_jj.inverse()
    if b_jj.is_zero():
        if dd != bi * b_ij:
            raise InconsistentIdealError("gcd ideal does not match its parts")
        return b_ij.inverse(), field.zero
    si = bi * b_ij
    sj = bj * b_jj
    if dd != si + sj:
        raise InconsistentIdealError("gcd ideal does not match its parts")
    dd_inv = dd.inverse()
    u_p, v_p = split_one(si * dd_inv, sj * dd_inv)
    return u_p / b_ij, v_p / b_jj


def crt_combine(a: FractionalIdeal, b: FractionalIdeal,
                y: FieldElement, w: FieldElement) -> FieldElement:
    """Element congruent to y modulo a and to w modulo b.

    Uses the splitting u + v = 1 with u in a, v in b and returns
    w*u + y*v (the congruences require integral residues to make
    sense; coprimality of the integral ideals is mandatory).
    """
    u, v = split_one(a, b)
    return w * u + y * v
