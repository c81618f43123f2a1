"""JSON encoding and decoding of fields, ideals, elements, and
pseudo-matrices.

All arbitrary-precision integers are serialized as decimal strings so
consumers without big-integer JSON support cannot silently truncate
them; parsing accepts plain JSON numbers as well.  Rationals use the
string form "num/den".  Output is canonical: sorted keys, fixed
separators, a trailing newline, values in the package's canonical forms
-- byte-identical round trips for canonical input are a contract.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ValidationError
from .field import FieldElement, NumberField
from .hnf import HnfResult, PseudoMatrix, RunStats
from .ideals import FractionalIdeal


def _as_int(value, what):
    if isinstance(value, bool):
        raise ValidationError(f"{what}: expected an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError as err:
            raise ValidationError(f"{what}: bad integer {value!r}") from err
    raise ValidationError(f"{what}: expected an integer, got {type(value).__name__}")


def _as_fraction(value, what):
    if isinstance(value, str) and "/" in value:
        num, _, den = value.partition("/")
        try:
            return Fraction(int(num, 10), int(den, 10))
        except (ValueError, ZeroDivisionError) as err:
            raise ValidationError(f"{what}: bad rational {value!r}") from err
    return Fraction(_as_int(value, what))


def _require(obj, key, what):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{what}: missing field {key!r}")
    return obj[key]


def _istr(n: int) -> str:
    return str(int(n))


# -- field -------------------------------------------------------------------

def parse_field(obj) -> NumberField:
    """Field description: {"poly": [...], "basis": [[...]], "precision_bits": n}."""
    poly = [_as_int(c, "poly coefficient")
            for c in _require(obj, "poly", "field")]
    basis = obj.get("basis")
    if basis is not None:
        basis = [[_as_fraction(x, "basis entry") for x in row] for row in basis]
    bits = _as_int(obj.get("precision_bits", 128), "precision_bits")
    if bits < 32:
        raise ValidationError("precision_bits must be at least 32")
    delta = obj.get("lll_delta")
    kwargs = {}
    if delta is not None:
        kwargs["lll_delta"] = _as_fraction(delta, "lll_delta")
    return NumberField(poly, basis, precision_bits=bits, **kwargs)


def encode_field(fld: NumberField):
    return {
        "poly": [_istr(c) for c in fld.poly],
        "basis": [[f"{x.numerator}/{x.denominator}" if x.denominator != 1
                   else _istr(x.numerator) for x in row] for row in fld.basis],
        "precision_bits": fld.precision_bits,
    }


# -- elements and ideals ------------------------------------------------------

def parse_element(fld, obj) -> FieldElement:
    coords = [_as_int(c, "element coordinate")
              for c in _require(obj, "coords", "element")]
    if len(coords) != fld.degree:
        raise ValidationError("element coordinate count does not match the degree")
    den = _as_int(obj.get("den", 1), "element denominator")
    if den <= 0:
        raise ValidationError("element denominator must be positive")
    return FieldElement(fld, tuple(coords), den)


def encode_element(e: FieldElement):
    return {"coords": [_istr(c) for c in e.coords], "den": _istr(e.den)}


def parse_ideal(fld, obj) -> FractionalIdeal:
    den = _as_int(_require(obj, "den", "ideal"), "ideal denominator")
    mat = [[_as_int(x, "ideal matrix entry") for x in row]
           for row in _require(obj, "hnf", "ideal")]
    return FractionalIdeal.from_den_mat(fld, den, mat)


def encode_ideal(ideal: FractionalIdeal):
    return {"den": _istr(ideal.den),
            "hnf": [[_istr(x) for x in row] for row in ideal.mat]}


# -- pseudo-matrices and results ----------------------------------------------

def parse_pseudo_matrix(fld, obj) -> PseudoMatrix:
    n = _as_int(_require(obj, "n", "pseudo-matrix"), "n")
    ideals = [parse_ideal(fld, frag)
              for frag in _require(obj, "ideals", "pseudo-matrix")]
    entries = [[parse_element(fld, frag) for frag in row]
               for row in _require(obj, "entries", "pseudo-matrix")]
    if len(ideals) != n or len(entries) != n or any(len(r) != n for r in entries):
        raise ValidationError("pseudo-matrix dimensions are inconsistent")
    return PseudoMatrix(fld, entries, ideals)


def encode_pseudo_matrix(pm: PseudoMatrix):
    return {
        "n": pm.n,
        "ideals": [encode_ideal(i) for i in pm.ideals],
        "entries": [[encode_element(e) for e in row] for row in pm.entries],
    }


def encode_hnf_result(res: HnfResult, stats: RunStats | None = None,
                      modules_equal_flag: bool | None = None):
    out = {
        "n": len(res.ideals),
        "ideals": [encode_ideal(i) for i in res.ideals],
        "entries": [[encode_element(e) for e in row] for row in res.matrix],
        "det_ideal": encode_ideal(res.det_ideal),
    }
    if stats is not None:
        out["stats"] = stats.as_dict()
    if modules_equal_flag is not None:
        out["modules_equal"] = modules_equal_flag
    return out


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, two-space indent, newline at end."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ValidationError(f"invalid JSON: {err}") from err
