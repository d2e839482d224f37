import csv
import itertools
import json

import numpy as np
import pytest
from conftest import all_specs, diagrams_upto
from hypothesis import given, settings
from hypothesis import strategies as st

from diagmult import (
    Group,
    GroupSpec,
    TensorVector,
    chi,
    dense_matrix,
    epsilon,
    group_element_action,
    naive_mult,
    new_diagram,
    tensor_product,
)
from diagmult.errors import (
    IndexOutOfRangeError,
    KindMismatchError,
    NotAGroupElementError,
    SizeMismatchError,
)
from diagmult.kernels import OpCounter
from diagmult.oracle import (
    check_group_element,
    export_dense,
    flat_index,
    multi_index,
    sample_generator,
    symplectic_form,
)

O2 = GroupSpec(Group.ORTHOGONAL, 2)
SO2 = GroupSpec(Group.SPECIAL_ORTHOGONAL, 2)
SP2 = GroupSpec(Group.SYMPLECTIC, 2)


def D(l, k, *blocks):
    return new_diagram(l, k, blocks)


def test_flat_layout_last_digit_fastest():
    assert flat_index((1, 1), 3) == 0
    assert flat_index((1, 2), 3) == 1
    assert flat_index((2, 1), 3) == 3
    assert multi_index(5, 3, 2) == (2, 3)
    with pytest.raises(IndexOutOfRangeError):
        flat_index((4,), 3)


@pytest.mark.parametrize("a, b, expected", [(1, 2, 1), (2, 1, -1), (1, 1, 0), (2, 2, 0)])
def test_epsilon_sp2(a, b, expected):
    assert epsilon(a, b, SP2) == expected


def test_epsilon_only_pairs_within_one_symplectic_pair():
    sp4 = GroupSpec(Group.SYMPLECTIC, 4)
    assert epsilon(1, 4, sp4) == 0
    assert epsilon(3, 4, sp4) == 1
    with pytest.raises(IndexOutOfRangeError):
        epsilon(5, 1, sp4)


@pytest.mark.parametrize(
    "top, bottom, expected",
    [((1,), (2, 3), 1), ((2,), (1, 3), -1), ((1,), (1, 3), 0)],
)
def test_chi_examples(top, bottom, expected):
    assert chi(top, bottom, 3) == expected


def test_chi_rejects_wrong_length():
    with pytest.raises(SizeMismatchError):
        chi((1,), (2,), 3)


@given(st.permutations([1, 2, 3, 4]), st.integers(0, 4), st.integers(0, 2))
def test_chi_flips_under_transposition(word, s, i):
    swapped = list(word)
    swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
    assert chi(swapped[:s], swapped[s:], 4) == -chi(word[:s], word[s:], 4)


def test_dense_identity():
    for n in (1, 2, 3):
        g = GroupSpec(Group.ORTHOGONAL, n)
        assert np.array_equal(dense_matrix(g, D(1, 1, [1, 2])), np.eye(n, dtype=int))


def test_dense_cup_rows():
    assert dense_matrix(O2, D(0, 2, [1, 2])).tolist() == [[1, 0, 0, 1]]
    assert dense_matrix(SP2, D(0, 2, [1, 2])).tolist() == [[0, 1, -1, 0]]
    assert dense_matrix(SO2, D(0, 2, [1], [2])).tolist() == [[0, 1, -1, 0]]


def test_dense_rejects_inadmissible():
    with pytest.raises(KindMismatchError):
        dense_matrix(O2, D(1, 1, [1], [2]))


@pytest.mark.parametrize("g", all_specs(), ids=str)
def test_entries_are_signs(g):
    for d in diagrams_upto(g, 4):
        M = dense_matrix(g, d)
        allowed = {0, 1} if g.group in (Group.ORTHOGONAL, Group.SYMMETRIC) else {-1, 0, 1}
        assert set(np.unique(M).tolist()) <= allowed


def test_dense_matches_formula_by_hand_sp4():
    # F for the Sp(4) cap: entry (I) = epsilon(i1, i2).
    sp4 = GroupSpec(Group.SYMPLECTIC, 4)
    M = dense_matrix(sp4, D(2, 0, [1, 2]))
    J = symplectic_form(4)
    assert np.array_equal(M[:, 0], J.reshape(-1))


def test_naive_mult_examples():
    counter = OpCounter()
    assert naive_mult(np.eye(3, dtype=int), np.array([4, 5, 6])).tolist() == [4, 5, 6]
    assert naive_mult(np.array([[1, 0, 0, 1]]), np.array([1, 2, 3, 4]), counter).tolist() == [5]
    assert counter.total("multiplications") == 4 and counter.total("additions") == 3
    assert naive_mult(np.array([[1]]), np.array([7])).tolist() == [7]


def test_naive_mult_size_mismatch():
    with pytest.raises(SizeMismatchError):
        naive_mult(np.eye(2, dtype=int), np.arange(3))


def test_naive_mult_keeps_tensor_vectors():
    v = TensorVector(2, 2, np.array([1, 2, 3, 4]))
    out = naive_mult(dense_matrix(O2, D(0, 2, [1, 2])), v)
    assert out.order == 0 and out.coeffs.tolist() == [5]


def test_group_action_examples():
    v = np.array([1, 2, 3, 4])
    assert group_element_action(O2, np.eye(2, dtype=int), v, order=2).tolist() == [1, 2, 3, 4]
    assert group_element_action(O2, np.diag([1, -1]), v, order=2).tolist() == [1, -2, -3, 4]
    s2 = GroupSpec(Group.SYMMETRIC, 2)
    assert group_element_action(s2, [[0, 1], [1, 0]], np.array([10, 20]), order=1).tolist() == [20, 10]


def test_group_action_matches_kronecker_power(rng):
    g = GroupSpec(Group.SYMPLECTIC, 4)
    a = sample_generator(g, rng)
    v = rng.integers(-5, 6, size=4**2)
    assert np.array_equal(group_element_action(g, a, v, order=2), np.kron(a, a) @ v)


def test_non_elements_rejected():
    with pytest.raises(NotAGroupElementError):
        check_group_element(O2, [[1, 1], [0, 1]])
    with pytest.raises(NotAGroupElementError):
        check_group_element(SO2, np.diag([1, -1]))
    with pytest.raises(NotAGroupElementError):
        check_group_element(SP2, [[2, 0], [0, 1]])
    with pytest.raises(NotAGroupElementError):
        check_group_element(GroupSpec(Group.SYMMETRIC, 2), np.diag([1, -1]))


@pytest.mark.parametrize("g", all_specs(), ids=str)
def test_sampled_generators_are_members(g, rng):
    for _ in range(25):
        check_group_element(g, sample_generator(g, rng))


@pytest.mark.parametrize("g", all_specs(), ids=str)
def test_oracle_equivariance(g, rng):
    gens = [sample_generator(g, rng) for _ in range(4)]
    for d in diagrams_upto(g, 4):
        M = dense_matrix(g, d)
        v = rng.integers(-5, 6, size=g.n**d.k)
        for a in gens:
            lhs = M @ group_element_action(g, a, v, order=d.k)
            rhs = group_element_action(g, a, M @ v, order=d.l)
            assert np.array_equal(lhs, rhs), (g, d)


@pytest.mark.parametrize("g", all_specs(), ids=str)
def test_functoriality_on_tensor_products(g):
    small = diagrams_upto(g, 3)
    for d1, d2 in itertools.product(small[:12], repeat=2):
        prod = tensor_product(d1, d2)
        if g.group is Group.SPECIAL_ORTHOGONAL and len([b for b in prod.blocks if len(b) == 1]) not in (0, g.n):
            continue
        assert np.array_equal(dense_matrix(g, prod), np.kron(dense_matrix(g, d1), dense_matrix(g, d2)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_symmetric_dense_is_indicator(l, k, data):
    # E_pi(I, J) = 1 exactly when equal-block indices agree; compare against itertools brute force.
    g = GroupSpec(Group.SYMMETRIC, 2)
    options = [d for d in _partitions(l, k)]
    d = data.draw(st.sampled_from(options))
    M = dense_matrix(g, d)
    for I in itertools.product((1, 2), repeat=l):
        for J in itertools.product((1, 2), repeat=k):
            word = I + J
            ok = all(len({word[x - 1] for x in b}) == 1 for b in d.blocks)
            assert M[flat_index(I, 2), flat_index(J, 2)] == int(ok)


def _partitions(l, k):
    from diagmult.diagrams import set_partitions

    return [new_diagram(l, k, p) for p in set_partitions(list(range(1, l + k + 1)))]


def test_export_dense(tmp_path):
    d = D(0, 2, [1, 2])
    M = dense_matrix(SP2, d)
    path = tmp_path / "m.csv"
    header = export_dense(M, SP2, d, path)
    assert header == {"rows": 1, "cols": 4, "group": "Sp", "n": 2, "diagram": d.to_json()}
    with open(path) as fh:
        assert [list(map(int, r)) for r in csv.reader(fh)] == [[0, 1, -1, 0]]
    assert json.loads((tmp_path / "m.csv.json").read_text()) == header
