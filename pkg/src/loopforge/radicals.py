"""Radical machinery bridging the loop side and the algebra side.

Decides membership in the radical class of Moufang loops by two independent
routes (group-type composition factors vs. faithfulness of the canonical map
into the alternative quotient of the loop algebra), computes the loop
radical, produces embeddability verdicts with verified witnesses, and builds
the semisimple-quotient structure report.

The algebra-side criterion used here is injectivity of the canonical map
q -> image of q in FQ/I(Q).  The coefficient-sum functional is a unital
homomorphism of any loop algebra and descends to the quotient, so the ideal
generated by the elements e - q can never reach the unit; what actually
distinguishes embeddability over a field is whether the loop survives its
own alternative quotient undamaged.  When it does, the loop visibly embeds
into the invertible elements; when it does not, the recorded collision is
the obstruction.  The loop-side class and the algebra side are cross-checked
exactly where agreement is provable (see in_class_s); elsewhere a collapse
is reported with its collision, not crashed on.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from . import algebras, linalg, loops as loops_mod
from .algebras import (
    AlternativeLoopAlgebra,
    alternative_loop_algebra,
    augmentation_ideal,
    invert,
    nilpotency_index,
    principal_ideal,
    quotient_algebra,
)
from .errors import CrossCheckMismatch, OrderBoundExceeded
from .loops import (
    DEFAULT_SEED,
    Loop,
    SubloopSet,
    check_properties,
    group_type_radical,
    is_group_type,
    normal_subloops,
    quotient_loop,
)

RADICAL_ORDER_BOUND = 2000


def _require_moufang(loop: Loop) -> None:
    props = check_properties(loop)
    if not props.moufang.ok:
        raise CrossCheckMismatch(f"{loop.name} is not Moufang: witness {props.moufang.witness}")


def embedding_promised(loop: Loop, field) -> bool:
    """Whether radical-class membership provably forces a faithful quotient.

    Groups always survive (their loop algebra is associative, so nothing is
    quotiented).  A commutative nonassociative Moufang loop has a faithful
    alternative quotient exactly in characteristic 0 or 3: elsewhere the
    quotient is associative and must collapse part of the loop.  For
    noncommutative nonassociative loops no characteristic makes an
    unconditional promise; whether the canonical map survives is decided by
    the computation and recorded, not assumed.
    """
    props = check_properties(loop)
    if props.associative.ok:
        return True
    if props.commutative.ok:
        return field.char in (0, 3)
    return False


def find_simple_nonassociative_subloop(loop: Loop,
                                       bound: int = RADICAL_ORDER_BOUND) -> Optional[SubloopSet]:
    """A subloop that is a simple nonassociative loop, if one is reachable.

    Descends through non-group-type members of the normal subloop lattice;
    each recursion step stays inside an honest subloop of the original.
    """
    props = check_properties(loop)
    lattice = normal_subloops(loop, bound)
    proper = [s for s in lattice if not s.is_full()]
    if len(proper) == 1 and proper[0].is_trivial():
        # simple loop
        if not props.associative.ok:
            return SubloopSet(loop, tuple(range(loop.order)))
        return None
    for sub in sorted(proper, key=lambda s: (-s.order(), s.members)):
        if sub.is_trivial():
            continue
        if is_group_type(sub.as_loop(), bound):
            continue
        inner = find_simple_nonassociative_subloop(sub.as_loop(), bound)
        if inner is not None:
            mem = np.asarray(sub.members, dtype=np.int64)
            lifted = tuple(int(mem[i]) for i in inner.members)
            return SubloopSet(loop, lifted)
    return None


@dataclass
class ClassSResult:
    value: bool
    r1: Optional[bool]             # algebra side: canonical map faithful over F
    r2: bool                       # loop side: group-type radical is everything
    r3: bool                       # loop side: no simple nonassociative subloop
    embedding_promised: bool
    witness: Optional[SubloopSet] = None
    collision: Optional[tuple] = None

    @property
    def field_collapse(self) -> bool:
        """In the radical class, but the canonical map over F is not faithful."""
        return bool(self.value and self.r1 is False)

    def checks_json(self):
        return {"r1": self.r1, "r2": self.r2, "r3": self.r3,
                "embedding_promised": self.embedding_promised,
                "field_collapse": self.field_collapse}


def in_class_s(loop: Loop, field, bundle: Optional[AlternativeLoopAlgebra] = None,
               bound: int = RADICAL_ORDER_BOUND) -> ClassSResult:
    """Radical-class membership with all cross-checks that must hold.

    Loop side (the class definition used here): the group-type radical is the
    whole loop, equivalently no subloop is simple nonassociative; these two
    routes must agree, always.  Algebra side: injectivity of the canonical
    map into FQ/I(Q) over the given field, which by the factoring argument is
    exactly embeddability into the invertible elements of *any* unital
    alternative algebra over that field.  Fatal disagreements: an injective
    map on a loop with a simple nonassociative subloop (the known
    non-embeddability obstruction would be falsified), or a collapse where
    the embedding is provably promised.  A collapse of a radical-class loop
    over an unpromising field is a recorded fact, not an error; the collision
    pair documents it.
    """
    _require_moufang(loop)
    if loop.order > bound:
        raise OrderBoundExceeded(f"order {loop.order} exceeds bound {bound}")
    gr = group_type_radical(loop, bound)
    r2 = gr.is_full()
    witness = None if r2 else find_simple_nonassociative_subloop(loop, bound)
    r3 = witness is None
    if r2 != r3:
        raise CrossCheckMismatch(
            f"group-type radical and simple-subloop search disagree on {loop.name}")
    if bundle is None:
        bundle = alternative_loop_algebra(field, loop)
    r1 = bundle.canonical_injective
    promised = embedding_promised(loop, field)
    if r1 and not (r2 and r3):
        raise CrossCheckMismatch(
            f"{loop.name} has a simple nonassociative subloop yet embeds over "
            f"{field!r}: obstruction falsified")
    if promised and (r2 and r3) and not r1:
        raise CrossCheckMismatch(
            f"promised embedding of {loop.name} over {field!r} collapsed: "
            f"collision {bundle.collision}")
    return ClassSResult(value=r2 and r3, r1=r1, r2=r2, r3=r3,
                        embedding_promised=promised, witness=witness,
                        collision=bundle.collision)


def loop_radical(loop: Loop, field, bound: int = RADICAL_ORDER_BOUND) -> SubloopSet:
    """The largest normal subloop in the radical class.

    Computed as the group-type radical, confirmed on the algebra side for the
    radical subloop itself, and verified idempotent: the radical of the
    quotient by the radical is trivial.
    """
    _require_moufang(loop)
    gr = group_type_radical(loop, bound)
    sub = loop if gr.is_full() else gr.as_loop()
    confirmation = in_class_s(sub, field, bound=bound)
    if not confirmation.value:
        raise CrossCheckMismatch(f"radical subloop of {loop.name} is not in the radical class")
    if not gr.is_full() and not gr.is_trivial():
        q, _ = quotient_loop(loop, gr)
        if not group_type_radical(q, bound).is_trivial():
            raise CrossCheckMismatch(f"radical of {loop.name} is not idempotent")
    return gr


# -- embeddability -----------------------------------------------------------

@dataclass
class EmbeddabilityVerdict:
    loop_name: str
    field_spec: str
    outcome: str                            # "embeds" | "obstructed"
    checks: dict
    seed: int = DEFAULT_SEED
    embedding: Optional[np.ndarray] = None  # loop index -> quotient coordinates
    witness_members: Optional[tuple] = None
    witness_order: Optional[int] = None
    collision: Optional[tuple] = None
    images_distinct: Optional[bool] = None
    all_invertible: Optional[bool] = None
    multiplicative: Optional[bool] = None

    def to_json(self):
        witness = None
        if self.outcome == "obstructed":
            witness = {
                "simple_subloop_order": self.witness_order,
                "simple_subloop_members": list(self.witness_members or ()),
                "collision": list(self.collision) if self.collision else None,
            }
        return {
            "loop": self.loop_name,
            "field": self.field_spec,
            "outcome": self.outcome,
            "checks": self.checks,
            "witness": witness,
            "embedding_verified": {
                "images_distinct": self.images_distinct,
                "all_invertible": self.all_invertible,
                "multiplicative": self.multiplicative,
            } if self.outcome == "embeds" else None,
            "seed": self.seed,
        }


def _verify_embedding(bundle: AlternativeLoopAlgebra) -> tuple[bool, bool, bool]:
    """Injectivity, invertibility and multiplicativity of q -> image(q)."""
    quot = bundle.algebra
    images = bundle.images
    distinct = algebras._first_duplicate_rows(images) is None
    all_invertible = all(invert(quot, images[i]) is not None for i in range(images.shape[0]))
    t = bundle.loop.table
    prods = quot.mul_rows(images, images).reshape(images.shape[0], images.shape[0], quot.dim)
    expected = images[t]
    multiplicative = bool(np.array_equal(prods, expected))
    return distinct, all_invertible, multiplicative


def embeddability(loop: Loop, field, bundle: Optional[AlternativeLoopAlgebra] = None,
                  bound: int = RADICAL_ORDER_BOUND, seed: int = DEFAULT_SEED) -> EmbeddabilityVerdict:
    """Full verdict on embedding the loop into U(FQ/I(Q)) over the field.

    The embeds branch verifies the claim concretely (distinct invertible
    images, multiplicative on all pairs) without leaning on any theorem; the
    obstructed branch carries a verified simple nonassociative subloop and
    the collision actually realised in the quotient.
    """
    _require_moufang(loop)
    if bundle is None:
        bundle = alternative_loop_algebra(field, loop)
    result = in_class_s(loop, field, bundle=bundle, bound=bound)
    checks = result.checks_json()
    if bundle.canonical_injective:
        distinct, invertible, multiplicative = _verify_embedding(bundle)
        if not (distinct and invertible and multiplicative):
            raise CrossCheckMismatch(
                f"embedding verification failed on {loop.name} over {field!r}")
        return EmbeddabilityVerdict(
            loop_name=loop.name, field_spec=field.spec, outcome="embeds",
            checks=checks, seed=seed, embedding=bundle.images,
            images_distinct=distinct, all_invertible=invertible,
            multiplicative=multiplicative)
    witness = result.witness
    if witness is None:
        # in the radical class but the map collapsed: characteristic effect
        witness_members, witness_order = None, None
    else:
        wprops = check_properties(witness.as_loop())
        simple, _ = loops_mod.is_simple(witness.as_loop())
        if wprops.associative.ok or not wprops.moufang.ok or not simple:
            raise CrossCheckMismatch("obstruction witness failed verification")
        witness_members, witness_order = witness.members, witness.order()
    return EmbeddabilityVerdict(
        loop_name=loop.name, field_spec=field.spec, outcome="obstructed",
        checks=checks, seed=seed, witness_members=witness_members,
        witness_order=witness_order, collision=bundle.collision)


@dataclass
class CircleEmbeddingReport:
    ok: bool
    pairs: int

    def to_json(self):
        return {"ok": self.ok, "pairs": self.pairs}


def circle_embedding(loop: Loop, field,
                     bundle: Optional[AlternativeLoopAlgebra] = None) -> CircleEmbeddingReport:
    """Verify q -> e - image(q) lands in the circle loop multiplicatively.

    Checks (e - q) ∘ (e - q') = e - qq' on every pair of loop elements.
    """
    if bundle is None:
        bundle = alternative_loop_algebra(field, loop)
    quot = bundle.algebra
    images = bundle.images
    n = images.shape[0]
    e = quot.unit[None, :]
    b = quot.field.canon(e - images)
    ia = np.repeat(np.arange(n), n)
    ib = np.tile(np.arange(n), n)
    lhs = algebras.circle_pairwise(quot, b[ia], b[ib])
    rhs = quot.field.canon(e - quot.mul_rows(images, images).reshape(n * n, quot.dim))
    # e - q is 0 exactly at q = e; the ∘-identity matches
    ok = bool(np.array_equal(lhs, quot.field.canon(rhs)))
    exp = quot.field.canon((e - images)[loop.table[ia, ib]])
    ok = ok and bool(np.array_equal(lhs, exp))
    return CircleEmbeddingReport(ok=ok, pairs=n * n)


# -- structure report ---------------------------------------------------------

@dataclass
class WedderburnReport:
    loop_name: str
    field_spec: str
    radical_subloop: SubloopSet
    radical_ideal_dim: int
    algebra_dim: int
    quotient_dim: int
    dim_cross_check: bool
    quotient_is_field: bool
    omega_quotient_is_all: Optional[bool]
    sampled_principal_nilpotent: list = dc_field(default_factory=list)
    summand_dims: Optional[list] = None
    direct_sum_verified: Optional[bool] = None
    summands_span: Optional[str] = None
    seed: int = DEFAULT_SEED

    def to_json(self):
        return {
            "loop": self.loop_name,
            "field": self.field_spec,
            "radical_subloop_order": self.radical_subloop.order(),
            "radical_subloop_members": list(self.radical_subloop.members),
            "radical_ideal_dim": self.radical_ideal_dim,
            "algebra_dim": self.algebra_dim,
            "quotient_dim": self.quotient_dim,
            "checks": {
                "dim_cross_check": self.dim_cross_check,
                "quotient_is_field": self.quotient_is_field,
                "omega_quotient_is_all": self.omega_quotient_is_all,
                "sampled_principal_nilpotent": self.sampled_principal_nilpotent,
                "summand_dims": self.summand_dims,
                "direct_sum_verified": self.direct_sum_verified,
                "summands_span": self.summands_span,
            },
            "seed": self.seed,
        }


def wedderburn_report(loop: Loop, field, bundle: Optional[AlternativeLoopAlgebra] = None,
                      bound: int = RADICAL_ORDER_BOUND, seed: int = DEFAULT_SEED,
                      summand_dim_bound: int = 64) -> WedderburnReport:
    """Radical ideal, semisimple quotient and its decomposition checks.

    The radical ideal is the augmentation ideal of the loop radical; the
    dimension of the quotient is cross-checked against the alternative loop
    algebra of the quotient loop.  On the semisimple quotient: its own
    augmentation ideal must be everything, sampled principal ideals must not
    be nilpotent, and (small dimensions only) the principal ideals of the
    generators must split it into a verified direct sum.
    """
    _require_moufang(loop)
    if bundle is None:
        bundle = alternative_loop_algebra(field, loop)
    srad = loop_radical(loop, field, bound)
    quot_alg = bundle.algebra
    ideal = augmentation_ideal(quot_alg, srad)
    qdim = quot_alg.dim - ideal.dim
    if srad.is_full():
        expected_dim = 1
    elif srad.is_trivial():
        expected_dim = bundle.dim
    else:
        qloop, _ = quotient_loop(loop, srad)
        expected_dim = alternative_loop_algebra(field, qloop).dim
    dim_ok = qdim == expected_dim
    quotient_is_field = qdim == 1
    omega_all = None
    nilpotent_flags: list = []
    summands = None
    direct_ok = None
    span = None
    if not quotient_is_field:
        semi = quotient_algebra(quot_alg, ideal, verify=False)
        # generator images e - q inside the semisimple quotient
        e_minus_q = quot_alg.field.canon(bundle.images[0][None, :] - bundle.images)
        gens = semi.project_rows(e_minus_q)
        omega = linalg.ideal_closure([gens], semi.left_actions(), semi.right_actions(),
                                     field=semi.field, ambient_dim=semi.dim)
        omega_all = omega.is_full()
        rng = np.random.default_rng(seed)
        pick = rng.choice(gens.shape[0], size=min(6, gens.shape[0]), replace=False)
        for k in sorted(int(i) for i in pick):
            if not gens[k].any():
                continue
            pid = principal_ideal(semi, gens[k])
            idx = nilpotency_index(pid, semi)
            nilpotent_flags.append({"generator": k, "nilpotency_index": idx})
        if semi.dim <= summand_dim_bound:
            summands, direct_ok, span = _principal_splitting(semi, gens)
    return WedderburnReport(
        loop_name=loop.name, field_spec=field.spec, radical_subloop=srad,
        radical_ideal_dim=ideal.dim, algebra_dim=quot_alg.dim, quotient_dim=qdim,
        dim_cross_check=dim_ok, quotient_is_field=quotient_is_field,
        omega_quotient_is_all=omega_all, sampled_principal_nilpotent=nilpotent_flags,
        summand_dims=summands, direct_sum_verified=direct_ok, summands_span=span,
        seed=seed)


def _principal_splitting(alg, gens: np.ndarray):
    """Minimal principal ideals among the generators' closures.

    Returns (dims of the minimal ideals, direct flag, span label).  The sum
    is direct when its dimension equals the sum of the parts; the label says
    whether the minimal ideals span the whole algebra, only a proper ideal,
    or nothing.
    """
    ideals = []
    seen = set()
    for k in range(gens.shape[0]):
        if not gens[k].any():
            continue
        pid = principal_ideal(alg, gens[k])
        key = (pid.dim, pid.pivot_cols, tuple(tuple(r.tolist()) for r in pid.rows))
        if key in seen or pid.dim == 0:
            continue
        seen.add(key)
        ideals.append(pid)
    minimal: list = []
    for cand in sorted(ideals, key=lambda s: (s.dim, s.pivot_cols)):
        if any(m <= cand and m.dim < cand.dim for m in minimal):
            continue
        minimal = [m for m in minimal if not (cand <= m and cand.dim < m.dim)]
        if not any(cand == m for m in minimal):
            minimal.append(cand)
    if not minimal:
        return [], None, "empty"
    total = linalg.span_rows(alg.field, alg.dim,
                             np.vstack([m.basis_matrix() for m in minimal]))
    direct = bool(total.dim == sum(m.dim for m in minimal))
    span = "full" if total.is_full() else "proper"
    return [m.dim for m in minimal], direct, span
