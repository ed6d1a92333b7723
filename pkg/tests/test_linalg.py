from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import loopforge as lf
from loopforge.errors import DimensionMismatch
from loopforge.linalg import Subspace, nilpotency_index, power_sequence, span_rows


def naive_rref(rows, p):
    """Independent dense row reduction over GF(p); returns canonical rows."""
    rows = [list(int(x) % p for x in r) for r in rows]
    basis = []
    for r in rows:
        r = r[:]
        for b in basis:
            lead = next(i for i, x in enumerate(b) if x)
            if r[lead]:
                c = r[lead] * pow(b[lead], -1, p)
                r = [(x - c * y) % p for x, y in zip(r, b)]
        if any(r):
            lead = next(i for i, x in enumerate(r) if x)
            inv = pow(r[lead], -1, p)
            r = [(x * inv) % p for x in r]
            basis.append(r)
    # back-substitute to full reduced form and sort by pivot
    basis.sort(key=lambda b: next(i for i, x in enumerate(b) if x))
    for i, b in enumerate(basis):
        for j, other in enumerate(basis):
            if i == j:
                continue
            lead = next(k for k, x in enumerate(b) if x)
            if other[lead]:
                c = other[lead]
                basis[j] = [(x - c * y) % p for x, y in zip(other, b)]
    basis.sort(key=lambda b: next(i for i, x in enumerate(b) if x))
    return basis


@st.composite
def gf_matrix(draw):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    n = draw(st.integers(min_value=1, max_value=6))
    k = draw(st.integers(min_value=1, max_value=8))
    entries = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n),
                            min_size=k, max_size=k))
    return p, n, entries


@given(gf_matrix())
@settings(max_examples=150, deadline=None)
def test_rref_matches_naive_oracle(data):
    p, n, entries = data
    f = lf.PrimeField(p)
    s = span_rows(f, n, f.canon(np.asarray(entries, dtype=np.int64)))
    expected = naive_rref(entries, p)
    assert s.dim == len(expected)
    assert [r.tolist() for r in s.rows] == expected


def test_insert_examples():
    f = lf.QQ
    s = Subspace(f, 2)
    s._insert(f.vector([1, 0]))
    t, grew = lf.subspace_insert(s, f.vector([1, 0]))
    assert t.dim == 1 and not grew

    f2 = lf.PrimeField(2)
    s = Subspace(f2, 2)
    s._insert(f2.vector([1, 1]))
    s._insert(f2.vector([0, 1]))
    assert s.is_full()

    # e-g and (e-g)^2 = e+g+g^2 in GF(3)[C3] span a 2-dim subspace
    f3 = lf.PrimeField(3)
    s = Subspace(f3, 3)
    s._insert(f3.vector([1, -1, 0]))
    s._insert(f3.vector([1, 1, 1]))
    assert s.dim == 2
    assert [r.tolist() for r in s.rows] == [[1, 0, 2], [0, 1, 2]]


@given(gf_matrix())
@settings(max_examples=100, deadline=None)
def test_insert_idempotent(data):
    p, n, entries = data
    f = lf.PrimeField(p)
    s = span_rows(f, n, f.canon(np.asarray(entries, dtype=np.int64)))
    before = [r.tolist() for r in s.rows]
    for r in entries:
        t, grew = lf.subspace_insert(s, f.vector(r))
        assert not grew
        assert [row.tolist() for row in t.rows] == before


def test_dimension_mismatch():
    f = lf.PrimeField(3)
    s = Subspace(f, 3)
    with pytest.raises(DimensionMismatch):
        s._insert(f.vector([1, 0]))


def test_solve_examples():
    f = lf.QQ
    cols = [f.vector([1, 0]), f.vector([0, 1])]
    x = lf.solve(cols, f.vector([2, 3]), f)
    assert x.tolist() == [Fraction(2), Fraction(3)]

    assert lf.solve([f.vector([1, 1]), f.vector([2, 2])], f.vector([1, 0]), f) is None

    f3 = lf.PrimeField(3)
    x = lf.solve([f3.vector([1, 2]), f3.vector([0, 1])], f3.vector([1, 0]), f3)
    assert x.tolist() == [1, 1]


@given(gf_matrix())
@settings(max_examples=100, deadline=None)
def test_solve_round_trip(data):
    p, n, entries = data
    f = lf.PrimeField(p)
    a = f.canon(np.asarray(entries, dtype=np.int64)).T   # n x k columns matrix
    coeffs = np.arange(a.shape[1]) % p
    rhs = f.canon(a @ coeffs)
    x = lf.solve(list(a.T), rhs, f)
    assert x is not None
    assert np.array_equal(f.canon(a @ x), rhs)


def _fc3_actions(f):
    t = lf.cyclic(3).table
    alg = lf.loop_algebra(f, lf.cyclic(3))
    return alg.left_actions(), alg.right_actions()


def test_ideal_closure_examples():
    f = lf.PrimeField(3)
    left, right = _fc3_actions(f)
    zero_seed = lf.ideal_closure([f.zeros(3).reshape(1, -1)], left, right,
                                 field=f, ambient_dim=3)
    assert zero_seed.dim == 0

    basis = np.eye(3, dtype=np.int64)
    full = lf.ideal_closure([basis], left, right, field=f, ambient_dim=3)
    assert full.is_full()

    aug = lf.ideal_closure([f.vector([1, -1, 0]).reshape(1, -1)], left, right,
                           field=f, ambient_dim=3)
    assert aug.dim == 2
    # equals the brute-force span of {e-g, g-g^2, g^2-e}
    manual = span_rows(f, 3, f.canon(np.asarray(
        [[1, -1, 0], [0, 1, -1], [-1, 0, 1]], dtype=np.int64)))
    assert aug == manual


def test_ideal_closure_action_stability():
    f = lf.PrimeField(3)
    left, right = _fc3_actions(f)
    aug = lf.ideal_closure([f.vector([1, -1, 0]).reshape(1, -1)], left, right,
                           field=f, ambient_dim=3)
    basis = aug.basis_matrix()
    for act in left + right:
        assert aug.contains_rows(act(basis))


def test_subspace_power():
    f = lf.PrimeField(3)
    alg = lf.loop_algebra(f, lf.cyclic(3))
    omega = lf.augmentation_ideal(alg)
    assert lf.subspace_power(omega, alg.mul_rows, 1) == omega
    p2 = lf.subspace_power(omega, alg.mul_rows, 2)
    assert p2.dim == 1
    assert p2.rows[0].tolist() == [1, 1, 1]
    p3 = lf.subspace_power(omega, alg.mul_rows, 3)
    assert p3.dim == 0
    # S^k = 0 forces S^{k+1} = 0
    assert lf.subspace_power(omega, alg.mul_rows, 4).dim == 0
    # a full unital algebra absorbs: S^n = S
    full = span_rows(f, 3, np.eye(3, dtype=np.int64))
    assert lf.subspace_power(full, alg.mul_rows, 3) == full


def test_nilpotency_index_helper():
    f = lf.PrimeField(3)
    alg = lf.loop_algebra(f, lf.cyclic(3))
    omega = lf.augmentation_ideal(alg)
    assert nilpotency_index(omega, alg.mul_rows) == 3
    f5 = lf.PrimeField(5)
    alg5 = lf.loop_algebra(f5, lf.cyclic(3))
    omega5 = lf.augmentation_ideal(alg5)
    assert nilpotency_index(omega5, alg5.mul_rows) is None


def test_power_sequence_descends_for_subalgebras():
    f = lf.PrimeField(3)
    alg = lf.loop_algebra(f, lf.cyclic(3))
    omega = lf.augmentation_ideal(alg)
    seq = power_sequence(omega, alg.mul_rows, 4)
    dims = [s.dim for s in seq]
    assert dims == sorted(dims, reverse=True)


def test_rational_subspace():
    f = lf.QQ
    s = span_rows(f, 3, f.vector([Fraction(1, 2), Fraction(1, 3), 0]).reshape(1, -1))
    assert s.dim == 1
    assert s.rows[0].tolist() == [1, Fraction(2, 3), 0]
    assert s.contains(f.vector([3, 2, 0]))
    assert not s.contains(f.vector([1, 1, 1]))
