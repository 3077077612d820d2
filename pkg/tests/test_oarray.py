import itertools

import numpy as np
import pytest

from qstructure.gates import enumerate_gate_classes, gate_linear, latin_squares
from qstructure.oarray import (
    OAError,
    OrthogonalArray,
    combine_gates_to_oa,
    first_violation,
    max_columns_bound,
    verify_strength,
)

TERNARY_OA = """0,0,0,0
0,1,1,2
0,2,2,1
1,0,1,1
1,1,2,0
1,2,0,2
2,0,2,2
2,1,0,1
2,2,1,0
"""


def strength_oracle(data, s, t):
    """Independent check with numpy: every t-column projection has flat counts."""
    arr = np.array(data)
    lam = len(arr) // s**t
    for cols in itertools.combinations(range(arr.shape[1]), t):
        codes = (arr[:, cols] * (s ** np.arange(t)[::-1])).sum(axis=1)
        counts = np.bincount(codes, minlength=s**t)
        if not (counts == lam).all():
            return False
    return True


def test_ternary_golden_csv():
    oa = combine_gates_to_oa(enumerate_gate_classes(3))
    assert oa.to_csv() == TERNARY_OA
    assert (oa.rows, oa.cols, oa.levels, oa.strength, oa.index) == (9, 4, 3, 2, 1)
    assert verify_strength(oa)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_linear_family_is_oa(p):
    oa = combine_gates_to_oa([gate_linear(p, i) for i in range(1, p)])
    assert oa.cols == max_columns_bound(p) == p + 1
    assert verify_strength(oa) and strength_oracle(oa.data, p, 2)


def test_no_fifth_column_for_ternary():
    oa = combine_gates_to_oa(enumerate_gate_classes(3))
    for sq in latin_squares(3):
        bigger = oa.with_column([v for _, _, v in sq.rows()])
        assert not verify_strength(bigger)
        assert not strength_oracle(bigger.data, 3, 2)


def test_single_mutation_reports_first_violation():
    rows = [list(r) for r in OrthogonalArray.from_csv(TERNARY_OA, 3, 2).data]
    rows[4][3] = 1
    bad = first_violation(OrthogonalArray.from_rows(rows, 3, 2))
    # Row 4 is (1,1,2,0): (a=1, g2=0) loses its only occurrence, the first
    # lexicographic miss among columns (0,3).
    assert (bad.cols, bad.tuple, bad.count) == ((0, 3), (1, 0), 0)
    assert str(bad) == "cols=(0,3) tuple=(1,0)×0"


def test_violation_format_with_surplus():
    data = [(0, 0), (0, 0), (1, 1), (1, 0)]
    bad = first_violation(OrthogonalArray.from_rows(data, 2, 1))
    assert str(bad) == "cols=(1) tuple=(0)×3"


def test_index_must_be_integral():
    with pytest.raises(OAError, match="divisible"):
        OrthogonalArray.from_rows([(0, 0)] * 5, 2, 2).index


def test_malformed_csv():
    with pytest.raises(OAError, match="line 2"):
        OrthogonalArray.from_csv("0,1\n0,x\n", 2, 1)
    with pytest.raises(OAError, match="ragged"):
        OrthogonalArray.from_csv("0,1\n0\n", 2, 1)
    with pytest.raises(OAError):
        OrthogonalArray.from_csv("0,3\n", 2, 1)


def test_random_arrays_agree_with_oracle():
    rng = np.random.default_rng(7)
    for _ in range(200):
        data = rng.integers(0, 2, size=(8, 3)).tolist()
        oa = OrthogonalArray.from_rows(data, 2, 2)
        assert verify_strength(oa) == strength_oracle(data, 2, 2)
