"""Certified root enclosures and Gram matrices of the embedding form."""

from fractions import Fraction

from nfhnf.embeddings import (
    gram_enclosure,
    interval_det,
    isolate_roots,
    poly_eval_box,
    poly_eval_interval,
)

POWER2 = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]


def test_signatures():
    assert isolate_roots([1, 0, 1]).signature == (0, 2 // 2)
    assert isolate_roots([-1, -1, 1]).signature == (2, 0)
    assert isolate_roots([-1, -1, 0, 1]).signature == (1, 1)
    assert isolate_roots([-2, 0, 0, 1]).signature == (1, 1)
    assert isolate_roots([7, 1]).signature == (1, 0)


def test_degree_one_exact():
    roots = isolate_roots([7, 1])
    (lo, hi), = roots.real
    assert lo == hi == -7


def test_real_enclosures_contain_roots():
    roots = isolate_roots([-1, -1, 1])  # golden ratio and conjugate
    phi = (1 + 5 ** 0.5) / 2
    values = sorted(((float(lo) + float(hi)) / 2 for lo, hi in roots.real))
    assert abs(values[0] - (1 - phi)) < 1e-20
    assert abs(values[1] - phi) < 1e-20


def test_gram_encloses_trace_form_gaussian():
    roots = isolate_roots([1, 0, 1])
    lo, hi = gram_enclosure(POWER2, roots)
    assert lo[0][0] <= 2 <= hi[0][0]
    assert lo[1][1] <= 2 <= hi[1][1]
    assert lo[0][1] <= 0 <= hi[0][1]
    det = interval_det([[(lo[i][j], hi[i][j]) for j in range(2)]
                        for i in range(2)])
    assert det[0] <= 4 <= det[1]


def test_gram_encloses_trace_form_real_quadratic():
    roots = isolate_roots([-1, -1, 1])
    lo, hi = gram_enclosure(POWER2, roots)
    for (i, j), expect in {(0, 0): 2, (0, 1): 1, (1, 1): 3}.items():
        assert lo[i][j] <= expect <= hi[i][j]
    det = interval_det([[(lo[i][j], hi[i][j]) for j in range(2)]
                        for i in range(2)])
    assert det[0] <= 5 <= det[1]


def test_enclosure_width_tracks_precision():
    roots = isolate_roots([-1, -1, 0, 1], precision_bits=128)
    basis = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    lo, hi = gram_enclosure(basis, roots)
    for i in range(3):
        for j in range(3):
            assert hi[i][j] - lo[i][j] < Fraction(1, 2 ** 100)


def test_interval_horner():
    # (x - 1)(x - 2) = x^2 - 3x + 2 on [0, 3] contains values in [-1/4, 2]
    iv = poly_eval_interval([2, -3, 1], (Fraction(0), Fraction(3)))
    assert iv[0] <= Fraction(-1, 4) and iv[1] >= 2
    box = poly_eval_box([2, -3, 1], ((Fraction(1), Fraction(1)),
                                     (Fraction(0), Fraction(0))))
    assert box[0][0] <= 0 <= box[0][1]
    assert box[1][0] <= 0 <= box[1][1]
