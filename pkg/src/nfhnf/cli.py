"""Command-line interface.

Subcommands wrap the library operations with JSON files in and out:

    hnf       --field F.json --input M.json [--modulus G.json] [--oracle]
    detideal  --field F.json --input M.json
    normalize --field F.json --input '{"ideal": ..., "row": [...]}'
    reduce    --field F.json --input '{"element": ..., "ideal": ...}'
    idops OP  --field F.json --input ...      (OP: add mul inv contains crt)
    selftest  [--seed N] [--quick] [--report-dir DIR]

Exit codes: 0 success, 1 malformed input (structured JSON error on
stderr), 2 verification failure (oracle mismatch or failed self-test).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import serialize
from .errors import NfhnfError
from .hnf import determinantal_ideal, hnf_naive, hnf_pipeline, modules_equal
from .ideals import crt_combine, normalize_row, reduce_mod_ideal


def _read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise NfhnfError(f"cannot read {path}: {err}") from err
    return serialize.loads(text)


def _emit(payload, out_path):
    text = serialize.dumps(payload)
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_delta(text):
    num, _, den = text.partition("/")
    try:
        value = Fraction(int(num), int(den)) if den else Fraction(int(num))
    except (ValueError, ZeroDivisionError) as err:
        raise NfhnfError(f"bad delta {text!r}") from err
    if not Fraction(1, 4) < value < 1:
        raise NfhnfError("lll delta must satisfy 1/4 < delta < 1")
    return value


def _load_field(args):
    obj = _read_json(args.field)
    if args.precision_bits is not None:
        if args.precision_bits < 32:
            raise NfhnfError("precision bits must be at least 32")
        obj["precision_bits"] = args.precision_bits
    if args.lll_delta is not None:
        delta = _parse_delta(args.lll_delta)
        obj["lll_delta"] = f"{delta.numerator}/{delta.denominator}"
    return serialize.parse_field(obj)


def _add_common(parser, with_input=True):
    parser.add_argument("--field", required=True, help="field description JSON")
    if with_input:
        parser.add_argument("--input", required=True, help="input JSON file")
    parser.add_argument("--precision-bits", type=int, default=None)
    parser.add_argument("--lll-delta", default=None, metavar="P/Q")
    parser.add_argument("--out", default=None, help="output path (default stdout)")


def cmd_hnf(args) -> int:
    fld = _load_field(args)
    pm = serialize.parse_pseudo_matrix(fld, _read_json(args.input))
    modulus = None
    if args.modulus:
        modulus = serialize.parse_ideal(fld, _read_json(args.modulus))
    result, stats = hnf_pipeline(pm, modulus=modulus)
    equal = None
    if args.oracle:
        oracle = hnf_naive(pm)
        equal = modules_equal(result.to_pseudo_matrix(fld),
                              oracle.to_pseudo_matrix(fld))
    _emit(serialize.encode_hnf_result(result, stats, equal), args.out)
    if equal is False:
        return 2
    return 0


def cmd_detideal(args) -> int:
    fld = _load_field(args)
    pm = serialize.parse_pseudo_matrix(fld, _read_json(args.input))
    _emit({"det_ideal": serialize.encode_ideal(determinantal_ideal(pm))},
          args.out)
    return 0


def cmd_normalize(args) -> int:
    fld = _load_field(args)
    obj = _read_json(args.input)
    ideal = serialize.parse_ideal(fld, obj.get("ideal") or {})
    row = [serialize.parse_element(fld, frag) for frag in obj.get("row") or []]
    res = normalize_row(ideal, row)
    _emit({"ideal": serialize.encode_ideal(res.ideal),
           "row": [serialize.encode_element(e) for e in res.row]}, args.out)
    return 0


def cmd_reduce(args) -> int:
    fld = _load_field(args)
    obj = _read_json(args.input)
    elt = serialize.parse_element(fld, obj.get("element") or {})
    ideal = serialize.parse_ideal(fld, obj.get("ideal") or {})
    _emit({"element": serialize.encode_element(reduce_mod_ideal(elt, ideal))},
          args.out)
    return 0


def cmd_idops(args) -> int:
    fld = _load_field(args)
    obj = _read_json(args.input)

    def ideal(key):
        return serialize.parse_ideal(fld, obj.get(key) or {})

    def element(key):
        return serialize.parse_element(fld, obj.get(key) or {})

    op = args.op
    if op == "add":
        payload = {"result": serialize.encode_ideal(ideal("a") + ideal("b"))}
    elif op == "mul":
        payload = {"result": serialize.encode_ideal(ideal("a") * ideal("b"))}
    elif op == "inv":
        payload = {"result": serialize.encode_ideal(ideal("a").inverse())}
    elif op == "contains":
        payload = {"result": ideal("a").contains(element("element"))}
    else:  # crt
        z = crt_combine(ideal("a"), ideal("b"), element("y"), element("w"))
        payload = {"result": serialize.encode_element(z)}
    _emit(payload, args.out)
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_all

    results, records = run_all(seed=args.seed, quick=args.quick)
    for res in results:
        print(res.line())
    worst = max((r.ratio for r in records), default=0.0)
    total = sum(r.seconds for r in records)
    print(f"worst size ratio: {worst:.3f}")
    print(f"pipeline corpus time: {total:.1f}s over {len(records)} cases")
    if args.report_dir:
        from .report import write_report

        paths = write_report(records, args.report_dir)
        for p in paths:
            print(f"wrote {p}")
    return 0 if all(r.passed for r in results) else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nfhnf",
        description="Hermite normal form of modules over rings of integers "
                    "of number fields, in exact arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hnf", help="triangular pseudo-basis of a module")
    _add_common(p)
    p.add_argument("--modulus", default=None,
                   help="ideal JSON overriding the computed modulus")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the naive elimination")
    p.set_defaults(fn=cmd_hnf)

    p = sub.add_parser("detideal", help="determinantal ideal of a module")
    _add_common(p)
    p.set_defaults(fn=cmd_detideal)

    p = sub.add_parser("normalize", help="normalize a one-dimensional module")
    _add_common(p)
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("reduce", help="reduce an element modulo an ideal")
    _add_common(p)
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("idops", help="single ideal operation")
    p.add_argument("op", choices=["add", "mul", "inv", "contains", "crt"])
    _add_common(p)
    p.set_defaults(fn=cmd_idops)

    p = sub.add_parser("selftest", help="run the built-in property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true",
                   help="smaller corpus (smoke test)")
    p.add_argument("--report-dir", default=None,
                   help="write CSV and figures of the run telemetry here")
    p.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NfhnfError as err:
        sys.stderr.write(serialize.dumps(
            {"error": err.code, "detail": str(err)}))
        return 1
    except ZeroDivisionError as err:
        sys.stderr.write(serialize.dumps(
            {"error": "division_by_zero", "detail": str(err)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
