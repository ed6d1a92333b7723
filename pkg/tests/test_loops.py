import json
from itertools import product

import numpy as np
import pytest

import loopforge as lf
from loopforge.errors import (
    LatinSquareViolation,
    NoIdentityAtZero,
    NotCommutativeMoufang,
    NotNormal,
)


# -- independent naive predicates (the oracles) -----------------------------

def naive_moufang(loop):
    n = loop.order
    for x, y, z in product(range(n), repeat=3):
        if loop.mul(loop.mul(x, loop.mul(y, x)), z) != \
                loop.mul(x, loop.mul(y, loop.mul(x, z))):
            return False
    return True


def naive_associative(loop):
    n = loop.order
    for x, y, z in product(range(n), repeat=3):
        if loop.mul(loop.mul(x, y), z) != loop.mul(x, loop.mul(y, z)):
            return False
    return True


def naive_normal_closure(loop, gens):
    n = loop.order
    members = {0} | set(gens)
    changed = True
    while changed:
        changed = False
        snapshot = sorted(members)
        for a in snapshot:
            for b in snapshot:
                members.add(loop.mul(a, b))
        for m in snapshot:
            for x in range(n):
                members.add(loop.rdiv(loop.mul(x, m), x))           # xN = Nx
                for y in range(n):
                    members.add(loop.ldiv(loop.mul(x, y),
                                          loop.mul(x, loop.mul(y, m))))   # x(yN)=(xy)N
                    members.add(loop.rdiv(loop.mul(loop.mul(m, x), y),
                                          loop.mul(x, y)))                # (Nx)y=N(xy)
        if len(members) != len(snapshot):
            changed = True
    return tuple(sorted(members))


# -- validation ---------------------------------------------------------------

def test_loop_from_table_valid():
    loop = lf.loop_from_table(["e", "g"], [[0, 1], [1, 0]])
    assert loop.order == 2


def test_latin_square_violation():
    with pytest.raises(LatinSquareViolation) as exc:
        lf.loop_from_table(["e", "g"], [[0, 1], [1, 1]])
    assert exc.value.axis == "row"
    assert exc.value.index == 1
    assert exc.value.value == 1


def test_identity_not_at_zero_rejected():
    with pytest.raises(NoIdentityAtZero):
        lf.loop_from_table(["a", "b"], [[1, 0], [0, 1]])


def test_cayley_round_trip(chein12):
    doc = lf.loop_to_cayley(chein12)
    again = lf.loop_from_cayley(doc)
    assert np.array_equal(again.table, chein12.table)
    assert json.dumps(doc, sort_keys=True) == json.dumps(lf.loop_to_cayley(again), sort_keys=True)


# -- property checks -----------------------------------------------------------

def test_s3_properties(s3):
    r = lf.check_properties(s3)
    assert r.moufang.ok and r.associative.ok and not r.commutative.ok
    assert r.exponent == 6
    assert naive_moufang(s3) and naive_associative(s3)


def test_chein12_properties(chein12):
    r = lf.check_properties(chein12)
    assert r.moufang.ok and r.moufang.mode == "exhaustive"
    assert not r.associative.ok
    assert r.associative.witness is not None
    x, y, z = r.associative.witness
    assert chein12.mul(chein12.mul(x, y), z) != chein12.mul(x, chein12.mul(y, z))
    assert naive_moufang(chein12) and not naive_associative(chein12)


def test_cml81_properties(cml81):
    r = lf.check_properties(cml81)
    assert r.commutative.ok and r.moufang.ok and not r.associative.ok
    assert r.exponent == 3
    assert r.is_p_loop(3)
    assert not r.is_p_loop(2)


def test_moufang_implies_ip(s3, c6, chein12, cml81, paige2):
    for loop in (s3, c6, chein12, cml81, paige2):
        r = lf.check_properties(loop)
        assert r.moufang.ok
        assert r.ip.ok and r.ip.mode == "exhaustive"


def test_element_order_divides_loop_order(s3, chein12, cml81, paige2):
    for loop in (s3, chein12, cml81, paige2):
        for o in lf.check_properties(loop).element_orders:
            assert loop.order % o == 0


# -- associators, subloops, closures -------------------------------------------

def test_group_associators_trivial(s3):
    for x, y, z in product(range(6), repeat=3):
        a, _ = lf.loop_assoc_comm(s3, x, y, z)
        assert a == 0


def test_cml81_associator_witness(cml81):
    a, _ = lf.loop_assoc_comm(cml81, 27, 9, 3)   # the three coordinate axes
    assert a != 0


def test_commutator_trivial_in_commutative(cml81):
    rng = np.random.default_rng(1)
    for _ in range(30):
        x, y = rng.integers(0, 81, 2)
        _, c = lf.loop_assoc_comm(cml81, int(x), int(y), 0)
        assert c == 0


def test_subloop_generated(s3):
    sub = lf.subloop_generated(s3, [1])      # a 3-cycle
    assert sub.members == (0, 1, 2)
    assert lf.is_subloop(s3, sub.members)


def test_two_generated_subloops_associative(cml81, paige2):
    rng = np.random.default_rng(lf.DEFAULT_SEED)
    for loop in (cml81, paige2):
        for _ in range(6):
            g = [int(rng.integers(1, loop.order)), int(rng.integers(1, loop.order))]
            sub = lf.subloop_generated(loop, g)
            assert lf.check_properties(sub.as_loop()).associative.ok


def test_two_generated_subloops_associative_exhaustive(chein12):
    # diassociativity, checked on every generator pair of a small Moufang loop
    for x in range(1, 12):
        for y in range(x, 12):
            sub = lf.subloop_generated(chein12, [x, y])
            assert lf.check_properties(sub.as_loop()).associative.ok


def test_normal_closure_s3(s3):
    assert lf.normal_closure(s3, [1]).members == (0, 1, 2)
    assert lf.normal_closure(s3, [3]).members == tuple(range(6))
    assert naive_normal_closure(s3, [1]) == (0, 1, 2)
    assert naive_normal_closure(s3, [3]) == tuple(range(6))


def test_normal_closure_matches_naive_on_chein12(chein12):
    for x in range(1, 12):
        fast = lf.normal_closure(chein12, [x]).members
        assert fast == naive_normal_closure(chein12, [x])


def test_normal_closure_output_is_normal(s3, chein12, cml81):
    for loop in (s3, chein12, cml81):
        for x in (1, loop.order // 2, loop.order - 1):
            sub = lf.normal_closure(loop, [x])
            assert lf.verify_normal(loop, sub) is None


def test_paige2_normal_closures_full(paige2):
    for x in (1, 17, 119):
        assert lf.normal_closure(paige2, [x]).is_full()


# -- quotients ------------------------------------------------------------------

def test_quotient_s3_by_a3(s3):
    q, proj = lf.quotient_loop(s3, lf.normal_closure(s3, [1]))
    assert q.order == 2
    assert proj[0] == 0


def test_quotient_chein12_by_s3(chein12):
    sub = lf.SubloopSet(chein12, tuple(range(6)))
    q, _ = lf.quotient_loop(chein12, sub)
    assert q.order == 2


def test_quotient_cml81_by_center(cml81):
    q, _ = lf.quotient_loop(cml81, lf.center(cml81))
    r = lf.check_properties(q)
    assert q.order == 27 and r.associative.ok and r.commutative.ok and r.exponent == 3


def test_quotient_rejects_non_normal(s3):
    sub = lf.subloop_generated(s3, [3])      # order-2 subgroup, not normal
    assert sub.order() == 2
    with pytest.raises(NotNormal):
        lf.quotient_loop(s3, sub)


def test_quotient_of_moufang_is_moufang(chein12, cml81):
    for loop in (chein12, cml81):
        for sub in lf.normal_subloops(loop):
            if sub.is_full() or sub.is_trivial():
                continue
            q, _ = lf.quotient_loop(loop, sub)
            assert lf.check_properties(q).moufang.ok


# -- centre and central series ---------------------------------------------------

def test_centers(s3, c6, cml81):
    assert lf.center(s3).members == (0,)
    assert lf.center(c6).is_full()
    assert lf.center(cml81).order() == 3


def test_central_series_cml81(cml81):
    up = lf.central_series(cml81, "upper")
    low = lf.central_series(cml81, "lower")
    assert up.nilpotency_class == 2
    assert low.nilpotency_class == 2
    assert [t.order() for t in up.terms] == [1, 3, 81]
    assert [t.order() for t in low.terms] == [81, 3, 1]
    assert low.weight_alignment == "weight_i_equals_term_{i+1}"


def test_central_series_s3_not_nilpotent(s3):
    assert lf.central_series(s3, "upper").nilpotency_class is None
    assert lf.central_series(s3, "lower").nilpotency_class is None


def test_central_series_abelian(c6):
    assert lf.central_series(c6, "upper").nilpotency_class == 1
    assert lf.central_series(c6, "lower").nilpotency_class == 1


# -- simplicity, products, radical -----------------------------------------------

def test_is_simple(s3, paige2):
    ok, witness = lf.is_simple(s3)
    assert not ok and witness.members == (0, 1, 2)
    assert lf.is_simple(lf.cyclic(5))[0]
    assert lf.is_simple(paige2)[0]


def test_direct_product_small():
    prod = lf.direct_product(lf.cyclic(2), lf.cyclic(3))
    r = lf.check_properties(prod)
    assert prod.order == 6 and r.associative.ok and r.commutative.ok and r.exponent == 6


def test_direct_product_with_trivial(s3):
    prod = lf.direct_product(s3, lf.cyclic(1))
    assert np.array_equal(prod.table, s3.table)


def test_direct_product_structural(cml81):
    big = lf.direct_product(cml81, cml81)
    assert big.order == 6561 and not big.has_table()
    r = lf.check_properties(big, samples=20000)
    assert r.moufang.ok and r.commutative.ok and not r.associative.ok
    assert r.exponent == 3


def test_paige2_x_c2(paige2_x_c2):
    assert paige2_x_c2.order == 240
    r = lf.check_properties(paige2_x_c2)
    assert r.moufang.ok and not r.associative.ok
    ok, witness = lf.is_simple(paige2_x_c2)
    assert not ok


def test_group_type_radical_examples(s3, chein12, paige2):
    assert lf.group_type_radical(s3).is_full()
    assert lf.group_type_radical(paige2).is_trivial()
    assert lf.group_type_radical(chein12).is_full()


def test_chein12_composition_factors(chein12):
    factors = lf.composition_factors(chein12)
    assert sorted(f.order for f in factors) == [2, 2, 3]
    assert all(lf.check_properties(f).associative.ok for f in factors)


def test_group_type_radical_idempotent_and_hereditary(paige2_x_c2):
    gr = lf.group_type_radical(paige2_x_c2)
    assert gr.order() == 2
    q, _ = lf.quotient_loop(paige2_x_c2, gr)
    assert lf.group_type_radical(q).is_trivial()
    full_members = frozenset(gr.members)
    for sub in lf.normal_subloops(paige2_x_c2):
        target = paige2_x_c2 if sub.is_full() else sub.as_loop()
        grn = lf.group_type_radical(target)
        lifted = frozenset(sub.members[i] for i in grn.members)
        assert lifted == frozenset(sub.members) & full_members


# -- identity (44) -----------------------------------------------------------------

def test_identity44_holds_on_cml81(cml81):
    ok, witness = lf.check_identity44(cml81, tuple_samples=200)
    assert ok and witness is None


def test_identity44_identity_tuple(cml81):
    ok, _ = lf.check_identity44(cml81, tuples=[(0,) * 7])
    assert ok


def test_identity44_abelian_group(c6):
    ok, _ = lf.check_identity44(c6, tuple_samples=50)
    assert ok


def test_identity44_requires_commutative_moufang(s3):
    with pytest.raises(NotCommutativeMoufang):
        lf.check_identity44(s3, tuple_samples=1)
