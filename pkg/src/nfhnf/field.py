"""Number fields and exact arithmetic on their elements.

A field K = Q[x]/(f) is described by a monic squarefree integer
polynomial ``f`` together with a basis of an order: a square rational
matrix whose rows hold basis elements as coordinates over the power
basis 1, x, ..., x^(d-1).  At construction the basis is certified to
span a ring containing 1, LLL-reduced with respect to the Hermitian
trace form, and permuted/negated so the first basis element is exactly
1.  The multiplication table and discriminant are exact integers; the
Gram matrix of the trace form is kept as a certified rational enclosure
whose width is controlled by ``precision_bits``.

Elements are integer coordinate vectors over the reduced basis plus a
positive denominator, always in lowest terms.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

from . import embeddings
from .errors import (
    NoUnitInBasisError,
    NotARingError,
    NotMonicError,
    NotSquarefreeError,
    ValidationError,
)
from .linalg import (
    det_int,
    gram_inner,
    hnf_int,
    int_mat_inverse,
    lll_reduce,
    mat_mul,
    solve_rational,
    sqrt_upper,
)


def _poly_mul_mod(a, b, f):
    """Product of two rational polynomials modulo monic integer f."""
    d = len(f) - 1
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    for k in range(len(out) - 1, d - 1, -1):
        c = out[k]
        if not c:
            continue
        out[k] = Fraction(0)
        for i in range(d):
            out[k - d + i] -= c * f[i]
    return out[:d] + [Fraction(0)] * (d - len(out))


def _poly_derivative(f):
    return [i * c for i, c in enumerate(f)][1:]


def _poly_gcd_degree(a, b):
    """Degree of gcd(a, b) over Q (inputs as coefficient lists)."""
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]

    def trim(p):
        while p and not p[-1]:
            p.pop()
        return p

    a, b = trim(a), trim(b)
    while b:
        inv = 1 / b[-1]
        bb = [c * inv for c in b]
        r = list(a)
        while len(r) >= len(bb) and trim(r):
            if not r[-1]:
                r.pop()
                continue
            shift = len(r) - len(bb)
            lead = r[-1]
            for i, c in enumerate(bb):
                r[shift + i] -= lead * c
            r = trim(r)
        a, b = b, r
    return len(a) - 1


_GRAM_SCALE_BITS = 64


def _scale_gram(gram):
    """Symmetric integer approximation 2^64 * gram, rounded to nearest."""
    scale = 1 << _GRAM_SCALE_BITS
    return tuple(tuple(round(entry * scale) for entry in row) for row in gram)


class FieldElement:
    """Element of a number field: integer coordinates over a denominator."""

    __slots__ = ("field", "coords", "den")

    def __init__(self, field, coords, den=1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            den = -den
            coords = tuple(-c for c in coords)
        if den == 1:
            # gcd(anything, 1) = 1: already canonical.  Skipping the
            # coordinate gcd here matters, integral arithmetic dominates.
            coords = tuple(coords)
        else:
            # gcd(den, coords) via coords mod den: the reductions are
            # big-by-small divisions and every gcd runs on den-sized
            # numbers, which keeps canonicalization cheap even when the
            # coordinates are enormous.
            g = den
            for c in coords:
                if g == 1:
                    break
                if c:
                    g = math.gcd(g, c % g)
            if g > 1:
                coords = tuple(c // g for c in coords)
                den //= g
            else:
                coords = tuple(coords)
        self.field = field
        self.coords = coords
        self.den = den

    # -- basic predicates ---------------------------------------------------
    def is_zero(self):
        return not any(self.coords)

    def is_one(self):
        return self.den == 1 and self.coords == self.field._one_coords

    def is_integral(self):
        return self.den == 1

    def is_rational(self):
        return not any(self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.coords[0], self.den)

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if self.field is not other.field and self.field != other.field:
            raise ValueError("elements of different fields")

    def __add__(self, other):
        other = self.field.coerce(other)
        self._check(other)
        da, db = self.den, other.den
        coords = tuple(x * db + y * da for x, y in zip(self.coords, other.coords))
        return FieldElement(self.field, coords, da * db)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.coords), self.den)

    def __sub__(self, other):
        other = self.field.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __mul__(self, other):
        other = self.field.coerce(other)
        self._check(other)
        table = self.field.mult_table
        d = self.field.degree
        out = [0] * d
        for i, xi in enumerate(self.coords):
            if not xi:
                continue
            ti = table[i]
            for j, yj in enumerate(other.coords):
                if not yj:
                    continue
                c = xi * yj
                row = ti[j]
                for k in range(d):
                    if row[k]:
                        out[k] += c * row[k]
        return FieldElement(self.field, tuple(out), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        """Exact multiplicative inverse; raises ZeroDivisionError at 0."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        a = self._mult_matrix()
        det = det_int(a)
        if det == 0:
            raise ZeroDivisionError("element is a zero divisor")
        # Solve X * a = den * e_1 by Cramer: X_j = den * C_j0 / det with
        # C_j0 the (row j, column 0) cofactor.  Integer-only, which beats
        # rational elimination by a wide margin on large coordinates.
        d = self.field.degree
        coords = []
        for j in range(d):
            minor = [row[1:] for i, row in enumerate(a) if i != j]
            c = det_int(minor) * self.den
            coords.append(c if j % 2 == 0 else -c)
        return FieldElement(self.field, tuple(coords), det)

    def __truediv__(self, other):
        other = self.field.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.field.coerce(other) * self.inverse()

    def _mult_matrix(self):
        """Rows j = coordinates of (numerator of self) * w_j."""
        table = self.field.mult_table
        d = self.field.degree
        rows = []
        for j in range(d):
            row = [0] * d
            for i, xi in enumerate(self.coords):
                if not xi:
                    continue
                tij = table[i][j]
                for k in range(d):
                    if tij[k]:
                        row[k] += xi * tij[k]
            rows.append(row)
        return rows

    # -- invariants ---------------------------------------------------------
    def norm(self) -> Fraction:
        """Absolute field norm |N(x)|, an exact nonnegative rational."""
        return Fraction(abs(det_int(self._mult_matrix())),
                        self.den ** self.field.degree)

    def size(self) -> float:
        """Bit-size measure: log2(den) + degree * log2(max |coordinate|)."""
        m = max((abs(c) for c in self.coords), default=0)
        return math.log2(self.den) + self.field.degree * math.log2(max(m, 1))

    def t2_sq_bounds(self) -> tuple[Fraction, Fraction]:
        """Certified rational enclosure of the squared embedding length."""
        lo_m, hi_m = self.field.gram_lo, self.field.gram_hi
        lo = Fraction(0)
        hi = Fraction(0)
        for i, xi in enumerate(self.coords):
            if not xi:
                continue
            for j, xj in enumerate(self.coords):
                if not xj:
                    continue
                c = xi * xj
                if c > 0:
                    lo += c * lo_m[i][j]
                    hi += c * hi_m[i][j]
                else:
                    lo += c * hi_m[i][j]
                    hi += c * lo_m[i][j]
        k2 = self.den * self.den
        return (lo / k2, hi / k2)

    def t2_sq_upper(self) -> Fraction:
        return self.t2_sq_bounds()[1]

    def t2_norm_upper(self) -> float:
        """Certified upper bound on the embedding length (may overestimate)."""
        return float(sqrt_upper(max(self.t2_sq_upper(), Fraction(0))))

    # -- plumbing -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = self.field.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return (self.field is other.field or self.field == other.field) \
            and self.coords == other.coords and self.den == other.den

    def __hash__(self):
        return hash((self.coords, self.den))

    def __repr__(self):
        if self.den == 1:
            return f"Elt{list(self.coords)}"
        return f"Elt{list(self.coords)}/{self.den}"


class NumberField:
    """An order in a number field, with certified invariants.

    Args:
        poly: monic defining polynomial as [c0, ..., c_{d-1}, 1].
        basis: optional d x d rational matrix (rows = basis elements over
            the power basis); defaults to the power basis.  Must span a
            ring containing 1; maximality is the caller's business, as is
            irreducibility of the polynomial (only squarefreeness is
            checked -- over a product of fields the size bounds lose
            their meaning, but every operation stays well defined).
        precision_bits: target width 2^-precision_bits for the Gram
            matrix enclosure.
        lll_delta: reduction quality used here and by ideal operations.
    """

    def __init__(self, poly, basis=None, precision_bits=128,
                 lll_delta=Fraction(3, 4)):
        poly = [int(c) for c in poly]
        if len(poly) < 2 or poly[-1] != 1:
            raise NotMonicError("defining polynomial must be monic of degree >= 1")
        d = len(poly) - 1
        if _poly_gcd_degree(poly, _poly_derivative(poly)) > 0:
            raise NotSquarefreeError("defining polynomial has a repeated factor")
        if precision_bits < 8:
            raise ValidationError("precision_bits too small")
        if basis is None:
            basis = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
        else:
            basis = [[Fraction(x) for x in row] for row in basis]
            if len(basis) != d or any(len(row) != d for row in basis):
                raise ValidationError("basis must be a square matrix of the degree")

        self.poly = tuple(poly)
        self.degree = d
        self.precision_bits = int(precision_bits)
        self.lll_delta = Fraction(lll_delta)

        scaled = []
        for row in basis:
            m = reduce(math.lcm, (f.denominator for f in row), 1)
            scaled.append([int(f * m) for f in row])
        if det_int(scaled) == 0:
            raise ValidationError("basis rows are linearly dependent")

        # The lattice spanned by the rows must be a ring containing 1;
        # closure under multiplication is certified when the table over
        # the reduced basis comes out integral (same lattice, same check).
        one = solve_rational(basis, [Fraction(1)] + [Fraction(0)] * (d - 1))
        if one is None or any(f.denominator != 1 for f in one):
            raise NoUnitInBasisError("1 is not in the lattice spanned by the basis")

        self._construct_reduced(basis, [int(f) for f in one])

    # -- construction helpers ----------------------------------------------
    def _table_over(self, basis):
        """Multiplication table over ``basis``; NotARingError if non-integral."""
        d = self.degree
        f = [Fraction(c) for c in self.poly]
        table = []
        for i in range(d):
            row_i = []
            for j in range(d):
                prod = _poly_mul_mod(basis[i], basis[j], f)
                coords = solve_rational(basis, prod)
                if coords is None:
                    raise ValidationError("basis rows are linearly dependent")
                if any(c.denominator != 1 for c in coords):
                    raise NotARingError(
                        f"w_{i + 1} * w_{j + 1} leaves the lattice")
                row_i.append(tuple(int(c) for c in coords))
            table.append(tuple(row_i))
        return tuple(table)

    def _construct_reduced(self, basis, one_coords):
        d = self.degree
        bits = self.precision_bits
        while True:
            roots = embeddings.isolate_roots(list(self.poly), bits)
            lo, hi = embeddings.gram_enclosure(basis, roots)
            if self._widths_ok(lo, hi):
                break
            bits *= 2
        self.signature = roots.signature
        mid = _scale_gram(
            [[(lo[i][j] + hi[i][j]) / 2 for j in range(d)] for i in range(d)])

        reduced, transform = lll_reduce(
            [[int(i == j) for j in range(d)] for i in range(d)],
            mid, self.lll_delta)
        coord_rows = self._unit_first(transform, one_coords, mid)

        self.basis = tuple(
            tuple(sum(Fraction(coord_rows[i][k]) * basis[k][j] for k in range(d))
                  for j in range(d))
            for i in range(d)
        )
        while True:
            lo, hi = embeddings.gram_enclosure(self.basis, roots)
            if self._widths_ok(lo, hi):
                break
            bits *= 2
            roots = embeddings.isolate_roots(list(self.poly), bits)
        self.gram_lo = tuple(tuple(row) for row in lo)
        self.gram_hi = tuple(tuple(row) for row in hi)
        self.gram_mid = tuple(
            tuple((lo[i][j] + hi[i][j]) / 2 for j in range(d)) for i in range(d)
        )
        # Integer-scaled Gram for lattice reduction: keeps LLL's exact
        # rational Gram-Schmidt out of 128-bit-denominator arithmetic.
        # Certified comparisons always use gram_lo/gram_hi, never this.
        self.gram_lll = _scale_gram(self.gram_mid)
        self._log2_gram_hi_max = math.log2(float(max(
            max(abs(x) for x in row) for row in self.gram_hi)))
        self._ideal_cache = {}

        self.mult_table = self._table_over([list(row) for row in self.basis])
        if self.basis[0] != tuple([Fraction(1)] + [Fraction(0)] * (d - 1)):
            raise NoUnitInBasisError("failed to normalize the unit basis element")
        self._one_coords = tuple([1] + [0] * (d - 1))

        traces = self._trace_vector()
        trace_form = [[sum(self.mult_table[i][j][k] * traces[k] for k in range(d))
                       for j in range(d)] for i in range(d)]
        self.disc = det_int(trace_form)
        if self.disc == 0:
            raise NotSquarefreeError("degenerate trace form")
        det_iv = embeddings.interval_det(
            [[(self.gram_lo[i][j], self.gram_hi[i][j]) for j in range(d)]
             for i in range(d)])
        if not det_iv[0] <= abs(self.disc) <= det_iv[1]:
            raise ArithmeticError("Gram enclosure inconsistent with discriminant")

        self.zero = FieldElement(self, (0,) * d, 1)
        self.one = FieldElement(self, self._one_coords, 1)

    def _widths_ok(self, lo, hi):
        target = Fraction(1, 2 ** self.precision_bits)
        for row_lo, row_hi in zip(lo, hi):
            for a, b in zip(row_lo, row_hi):
                scale = max(Fraction(1), abs(a), abs(b))
                if b - a > target * scale:
                    return False
        return True

    def _unit_first(self, transform, one_coords, gram_mid):
        """Rows of a unimodular matrix: LLL-reduced with row 0 mapping to 1."""
        d = self.degree
        e = solve_rational(transform, one_coords)
        assert e is not None and all(f.denominator == 1 for f in e)
        e = [int(f) for f in e]
        unit_pos = None
        for j in range(d):
            if abs(e[j]) == 1 and all(e[k] == 0 for k in range(d) if k != j):
                unit_pos = j
                break
        rows = [list(r) for r in transform]
        if unit_pos is not None:
            row = rows.pop(unit_pos)
            if e[unit_pos] < 0:
                row = [-x for x in row]
            return [row] + rows
        # 1 is in the lattice but not among the reduced vectors: complete
        # its (primitive) coordinate row to a unimodular matrix, move the
        # result back to input coordinates, and re-reduce the complement.
        col = [[c] for c in e]
        _, w = hnf_int(col)
        w_inv = int_mat_inverse(w)
        completion = [[w_inv[i][j] for i in range(d)] for j in range(d)]
        assert completion[0] == e
        new_rows = mat_mul(completion, rows)
        head, tail = new_rows[0], new_rows[1:]
        head_sq = gram_inner(head, head, gram_mid)
        for t in tail:
            q = round(gram_inner(t, head, gram_mid) / head_sq)
            if q:
                t[:] = [x - q * y for x, y in zip(t, head)]
        if len(tail) > 1:
            tail, _ = lll_reduce(tail, gram_mid, self.lll_delta)
        return [head] + tail

    def _trace_vector(self):
        d = self.degree
        return [sum(self.mult_table[k][j][j] for j in range(d)) for k in range(d)]

    # -- element constructors ------------------------------------------------
    def element(self, coords, den=1) -> FieldElement:
        if len(coords) != self.degree:
            raise ValidationError("coordinate vector has wrong length")
        return FieldElement(self, tuple(int(c) for c in coords), int(den))

    def from_rational(self, q) -> FieldElement:
        q = Fraction(q)
        coords = [q.numerator] + [0] * (self.degree - 1)
        return FieldElement(self, tuple(coords), q.denominator)

    def from_poly_coords(self, coeffs) -> FieldElement:
        """Element given by rational coordinates over the power basis.

        Raises ValidationError when the value is not in the field (too
        many coefficients); values outside the order are fine, they just
        get a denominator.
        """
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            raise ValidationError("too many polynomial coefficients")
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        x = solve_rational([list(row) for row in self.basis], coeffs)
        assert x is not None
        den = reduce(lambda acc, f: acc * f.denominator // math.gcd(acc, f.denominator),
                     x, 1)
        return FieldElement(self, tuple(int(f * den) for f in x), den)

    def coerce(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, (int, Fraction)):
            return self.from_rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into the field")

    def omega(self, i) -> FieldElement:
        """i-th basis element (1-based, so omega(1) == 1)."""
        coords = [0] * self.degree
        coords[i - 1] = 1
        return FieldElement(self, tuple(coords), 1)

    # -- misc -----------------------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, NumberField)
                and self.poly == other.poly and self.basis == other.basis)

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"NumberField(degree={self.degree}, disc={self.disc})"
