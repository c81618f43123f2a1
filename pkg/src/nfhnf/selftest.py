"""Built-in verification corpus and the property suite that runs on it.

The suite backs both the ``selftest`` CLI command and the acceptance
test module: every check here is a hard correctness contract, verified
with exact arithmetic on seeded random instances over four built-in
fields (the rationals, the Gaussian integers, the golden-ratio ring and
the cubic field of discriminant -23).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

from .field import NumberField
from .hnf import (
    PseudoMatrix,
    det_cofactor,
    determinantal_ideal,
    hnf_naive,
    hnf_pipeline,
    module_contains,
    modules_equal,
)
from .ideals import (
    FractionalIdeal,
    audit_operations,
    crt_combine,
    pivot_uv,
    split_one,
)
from .linalg import det_int, hnf_int_lower

CORPUS_POLYS = {
    "Q": (-1, 1),
    "Q(i)": (1, 0, 1),
    "Q(sqrt5)": (-1, -1, 1),
    "Q(cubic23)": (-1, -1, 0, 1),
}

SIZE_RATIO_CEILING = 64.0


@lru_cache(maxsize=None)
def corpus_field(name: str) -> NumberField:
    return NumberField(list(CORPUS_POLYS[name]))


def corpus_fields():
    return {name: corpus_field(name) for name in CORPUS_POLYS}


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  {self.detail}"


@dataclass
class CaseRecord:
    """One pipeline case, kept for the delimited report and the figures."""

    field: str
    n: int
    index: int
    max_elt_size: float
    max_ideal_size: float
    bound_term: float
    ratio: float
    normalizations: int
    reductions: int
    seconds: float


# ---------------------------------------------------------------------------
# Random generators.

def rand_element(rng, fld, coord_bound=20, dens=(1, 2, 3)):
    return fld.element([rng.randint(-coord_bound, coord_bound)
                        for _ in range(fld.degree)], rng.choice(dens))


def rand_integral_element(rng, fld, coord_bound=9):
    while True:
        e = fld.element([rng.randint(-coord_bound, coord_bound)
                         for _ in range(fld.degree)])
        if not e.is_zero():
            return e


def rand_ideal(rng, fld) -> FractionalIdeal:
    """Integral ideal from at most two random generators."""
    mode = rng.randrange(3)
    if mode == 0:
        gens = [rand_integral_element(rng, fld)]
    elif mode == 1:
        gens = [rand_integral_element(rng, fld), rand_integral_element(rng, fld)]
    else:
        gens = [fld.from_rational(rng.choice((2, 3, 5, 7, 11, 13))),
                rand_integral_element(rng, fld)]
    return FractionalIdeal.from_generators(fld, gens)


def rand_pseudo_matrix(rng, fld, n) -> PseudoMatrix:
    """Full-rank pseudo-matrix with module contained in O^n.

    Entry denominators are cleared into the coefficient ideals (each
    ideal is scaled by the lcm of its row's denominators), which keeps
    the module integral without restricting the entry distribution.
    """
    while True:
        entries = [[rand_element(rng, fld) for _ in range(n)] for _ in range(n)]
        if not det_cofactor(fld, entries).is_zero():
            break
    ideals = []
    for row in entries:
        scale = 1
        for e in row:
            scale = scale * e.den // math.gcd(scale, e.den)
        ideal = rand_ideal(rng, fld)
        ideals.append(ideal * scale if scale != 1 else ideal)
    return PseudoMatrix(fld, entries, ideals)


def rand_coprime_pair(rng, fld):
    one = FractionalIdeal.unit_ideal(fld)
    while True:
        a = rand_ideal(rng, fld)
        b = rand_ideal(rng, fld)
        if a + b == one:
            return a, b


# ---------------------------------------------------------------------------
# Exact bound checks (rational comparisons only).

def normalization_bound_holds(ideal: FractionalIdeal) -> bool:
    """Nm(ideal) <= 2^(d^2/2) * sqrt|disc|, squared to stay rational."""
    fld = ideal.field
    d = fld.degree
    if not ideal.is_integral():
        return False
    return ideal.norm ** 2 <= Fraction(2 ** (d * d) * abs(fld.disc))


def reduction_bound_holds(elt, ideal: FractionalIdeal) -> bool:
    """||elt||^2 <= d^3 * 2^d * Nm(ideal)^(2/d) * |disc| via the certified
    upper bound, compared in the d-th power so everything is rational."""
    fld = elt.field
    d = fld.degree
    upper = elt.t2_sq_upper()
    if upper <= 0:
        return True
    bound = Fraction(d ** 3 * 2 ** d * abs(fld.disc)) ** d * ideal.norm ** 2
    return upper ** d <= bound


# ---------------------------------------------------------------------------
# Criteria.

def check_pipeline_corpus(seed=0, cases=200, dims=(1, 2, 3, 4, 5),
                          coord_bound=20, progress=None):
    """The main corpus run: modular pipeline vs oracle plus all
    per-operation bounds, on ``cases`` random pseudo-matrices spread
    over the corpus fields and the given dimensions.

    Returns (list of CriterionResult, list of CaseRecord).
    """
    rng = random.Random(seed)
    fields = corpus_fields()
    records = []
    oracle_bad = []
    prop9_bad = []
    norm_bad = 0
    red_bad = 0
    ratio_worst = 0.0
    lemma1_bad = []
    det_bad = []
    shape_bad = []
    normalize_calls = 0
    reduce_calls = 0

    case_specs = []
    idx = 0
    while len(case_specs) < cases:
        for name in fields:
            for n in dims:
                if len(case_specs) >= cases:
                    break
                case_specs.append((name, n, idx))
                idx += 1

    for name, n, index in case_specs:
        fld = fields[name]
        pm = rand_pseudo_matrix(rng, fld, n)
        t0 = time.perf_counter()
        with audit_operations() as audit:
            result, stats = hnf_pipeline(pm)
        elapsed = time.perf_counter() - t0
        out = result.to_pseudo_matrix(fld)

        normalize_calls += len(audit.normalized)
        reduce_calls += len(audit.reduced)
        for ideal in audit.normalized:
            if not normalization_bound_holds(ideal):
                norm_bad += 1
        for elt, ideal in audit.reduced:
            if not reduction_bound_holds(elt, ideal):
                red_bad += 1

        if not modules_equal(pm, out):
            prop9_bad.append((name, n, index))
        oracle = hnf_naive(pm)
        oracle_pm = oracle.to_pseudo_matrix(fld)
        prod_oracle = reduce(lambda a, b: a * b, oracle.ideals)
        if not (modules_equal(out, oracle_pm)
                and prod_oracle == result.det_ideal):
            oracle_bad.append((name, n, index))

        ok_shape = all(result.matrix[i][i].is_one() for i in range(n))
        ok_shape &= all(result.matrix[i][j].is_zero()
                        for i in range(n) for j in range(i + 1, n))
        ok_shape &= all(c.is_integral() for c in result.ideals)
        if not ok_shape:
            shape_bad.append((name, n, index))

        g = result.det_ideal
        basis_vectors = [[fld.one if k == i else fld.zero for k in range(n)]
                         for i in range(n)]
        if not all(module_contains(pm, g, e) for e in basis_vectors):
            lemma1_bad.append((name, n, index))

        if n <= 4:
            exact = det_cofactor(fld, pm.entries)
            expected = reduce(lambda a, b: a * b, pm.ideals) * exact
            if determinantal_ideal(pm) != expected:
                det_bad.append((name, n, index))

        ratio_worst = max(ratio_worst, stats.worst_ratio)
        records.append(CaseRecord(
            field=name, n=n, index=index,
            max_elt_size=stats.max_elt_size,
            max_ideal_size=stats.max_ideal_size,
            bound_term=stats.bound_term,
            ratio=stats.worst_ratio,
            normalizations=stats.normalizations,
            reductions=stats.reductions,
            seconds=elapsed,
        ))
        if progress:
            progress(records[-1])

    results = [
        CriterionResult(
            "oracle equivalence (modular pipeline vs naive)",
            not oracle_bad,
            f"{cases - len(oracle_bad)}/{cases} cases"
            + (f", first failure {oracle_bad[0]}" if oracle_bad else "")),
        CriterionResult(
            "module equality of input and pipeline output",
            not prop9_bad,
            f"{cases - len(prop9_bad)}/{cases} cases"
            + (f", first failure {prop9_bad[0]}" if prop9_bad else "")),
        CriterionResult(
            "normalization norm bound",
            norm_bad == 0,
            f"{normalize_calls} calls, {norm_bad} violations"),
        CriterionResult(
            "reduction length bound",
            red_bad == 0,
            f"{reduce_calls} reduction-path calls, {red_bad} violations"),
        CriterionResult(
            "triangular shape and integral ideals",
            not shape_bad,
            f"{cases - len(shape_bad)}/{cases} cases"),
        CriterionResult(
            "det ideal times unit vectors stays inside the module",
            not lemma1_bad,
            f"{cases - len(lemma1_bad)}/{cases} cases"),
        CriterionResult(
            "determinantal ideal vs exact cofactor determinant (n <= 4)",
            not det_bad,
            f"{sum(1 for _, n, _ in case_specs if n <= 4) - len(det_bad)} cases"
            + (f", first failure {det_bad[0]}" if det_bad else "")),
        CriterionResult(
            "element size containment under the engineering ceiling",
            ratio_worst <= SIZE_RATIO_CEILING,
            f"worst ratio {ratio_worst:.3f} (ceiling {SIZE_RATIO_CEILING:g})"),
    ]
    return results, records


def check_degree_one(seed=0, cases=100, sizes=(3, 4), entry_bound=50):
    """Over the rationals the pipeline must reproduce the classical
    integer HNF: same diagonal content ideals and the same row lattice."""
    rng = random.Random(seed)
    fld = corpus_field("Q")
    unit = FractionalIdeal.unit_ideal(fld)
    bad = 0
    for _ in range(cases):
        n = rng.choice(sizes)
        while True:
            m = [[rng.randint(-entry_bound, entry_bound) for _ in range(n)]
                 for _ in range(n)]
            if det_int(m) != 0:
                break
        pm = PseudoMatrix(fld,
                          [[fld.from_rational(x) for x in row] for row in m],
                          [unit] * n)
        result, _ = hnf_pipeline(pm)
        lower, _ = hnf_int_lower(m)
        ok = all(result.ideals[i]
                 == FractionalIdeal.from_generators(
                     fld, [fld.from_rational(lower[i][i])])
                 for i in range(n))
        scaled = []
        for i in range(n):
            c = result.ideals[i].mat[0][0]
            row = [result.matrix[i][j] * c for j in range(n)]
            if any(e.den != 1 for e in row):
                ok = False
                break
            scaled.append([e.coords[0] for e in row])
        if ok:
            ok = hnf_int_lower(scaled)[0] == lower
        if not ok:
            bad += 1
    return [CriterionResult(
        "degree-1 degeneration matches integer HNF",
        bad == 0, f"{cases - bad}/{cases} matrices")]


def check_crt(seed=0, per_field=100):
    rng = random.Random(seed)
    bad = 0
    total = 0
    for fld in corpus_fields().values():
        for _ in range(per_field):
            a, b = rand_coprime_pair(rng, fld)
            y = rand_integral_element(rng, fld, 30)
            w = rand_integral_element(rng, fld, 30)
            z = crt_combine(a, b, y, w)
            total += 1
            if not (a.contains(z - y) and b.contains(z - w)):
                bad += 1
    return [CriterionResult(
        "ideal CRT congruences",
        bad == 0, f"{total} pairs, {bad} violations")]


def check_ideal_algebra(seed=0, per_field=500):
    """Norm multiplicativity, exact inverses, and the splitting
    postconditions, all with exact comparisons."""
    rng = random.Random(seed)
    bad_norm = bad_inv = bad_split = 0
    total = 0
    for fld in corpus_fields().values():
        one = FractionalIdeal.unit_ideal(fld)
        for _ in range(per_field):
            total += 1
            a = rand_ideal(rng, fld)
            b = rand_ideal(rng, fld)
            if (a * b).norm != a.norm * b.norm:
                bad_norm += 1
            if a * a.inverse() != one:
                bad_inv += 1
            ca, cb = rand_coprime_pair(rng, fld)
            u, v = split_one(ca, cb)
            if not (ca.contains(u) and cb.contains(v) and (u + v).is_one()):
                bad_split += 1
            x = rand_integral_element(rng, fld, 9)
            y = rand_integral_element(rng, fld, 9)
            dd = ca * x + cb * y
            u2, v2 = pivot_uv(x, ca, y, cb, dd)
            dd_inv = dd.inverse()
            ok = (x * u2 + y * v2).is_one()
            ok = ok and _in_ideal(u2, ca * dd_inv) and _in_ideal(v2, cb * dd_inv)
            if not ok:
                bad_split += 1
    return [CriterionResult(
        "ideal algebra (norms, inverses, splittings)",
        bad_norm == bad_inv == bad_split == 0,
        f"{total} instances per check; violations: norm={bad_norm}, "
        f"inverse={bad_inv}, split={bad_split}")]


def _in_ideal(elt, ideal):
    return elt.is_zero() or ideal.contains(elt)


def run_all(seed=0, quick=False, progress=None):
    """Full property suite.  Returns (results, case_records)."""
    if quick:
        sizes = dict(cases=24, deg1=10, crt=8, algebra=12)
    else:
        sizes = dict(cases=200, deg1=100, crt=100, algebra=500)
    results, records = check_pipeline_corpus(
        seed=seed, cases=sizes["cases"], progress=progress)
    results += check_degree_one(seed=seed + 1, cases=sizes["deg1"])
    results += check_crt(seed=seed + 2, per_field=sizes["crt"])
    results += check_ideal_algebra(seed=seed + 3, per_field=sizes["algebra"])
    return results, records
