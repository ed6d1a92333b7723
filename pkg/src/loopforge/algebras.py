"""Finite-dimensional algebras over exact fields.

Covers loop algebras, the alternator ideal and its alternative quotient,
augmentation ideals, unitization, inverses and quasiinverses, the circle
operation and circle loops, nilpotency of ideals, and the quasiregular
radical in the supported regimes.

Loop algebras keep their permutation structure (basis products are basis
elements), so multiplication and the ideal-closure actions are index
gathers; general algebras carry a dense structure-constant tensor.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .errors import (
    AlternatorIdealFull,
    DimensionBoundExceeded,
    DimensionMismatch,
    IdealNotProper,
    IdealNotStable,
    NotNil,
    NotQuasiregular,
    SidedInverseMismatch,
    UnsupportedRadical,
)
from .fields import PrimeField
from .linalg import Subspace
from .loops import DEFAULT_SEED, Loop, SubloopSet

LOOP_ALGEBRA_DIM_BOUND = 2048
CIRCLE_TABLE_BOUND = 4096
CIRCLE_ENUM_BOUND = 2**20
RADICAL_ENUM_BOUND = 2**20


def _zeros(field, shape):
    if field.dtype != object:
        return np.zeros(shape, dtype=np.int64)
    out = np.empty(shape, dtype=object)
    out[...] = Fraction(0)
    return out


def _eye(field, n):
    out = _zeros(field, (n, n))
    for i in range(n):
        out[i, i] = out[i, i] + 1
    return out


class Algebra:
    """Base class: a finite-dimensional algebra with exact scalar entries."""

    field = None
    dim = 0
    names: tuple = ()
    unit: Optional[np.ndarray] = None

    def mul(self, v: np.ndarray, w: np.ndarray) -> np.ndarray:
        return self.mul_rows(np.asarray(v).reshape(1, -1), np.asarray(w).reshape(1, -1))[0]

    def mul_rows(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """All pairwise products of rows of a with rows of b, row-major."""
        raise NotImplementedError

    def mul_pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Row-by-row products: out[k] = a[k] * b[k]."""
        raise NotImplementedError

    def basis_vec(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = self.field.one
        return v

    def left_actions(self):
        raise NotImplementedError

    def right_actions(self):
        raise NotImplementedError

    def associator(self, a, b, c) -> np.ndarray:
        return self.field.canon(self.mul(self.mul(a, b), c) - self.mul(a, self.mul(b, c)))

    def commutator(self, a, b) -> np.ndarray:
        return self.field.canon(self.mul(a, b) - self.mul(b, a))

    def power(self, v: np.ndarray, k: int) -> np.ndarray:
        if k < 1:
            raise ValueError("power must be >= 1")
        out = np.asarray(v)
        for _ in range(k - 1):
            out = self.mul(out, v)
        return out


class LoopAlgebra(Algebra):
    """The loop algebra FQ: free module on the loop, table-driven products."""

    def __init__(self, field, loop: Loop):
        if not loop.has_table():
            raise DimensionBoundExceeded("loop algebra needs a dense Cayley table")
        if loop.order > LOOP_ALGEBRA_DIM_BOUND:
            raise DimensionBoundExceeded(
                f"order {loop.order} exceeds loop-algebra bound {LOOP_ALGEBRA_DIM_BOUND}")
        self.field = field
        self.loop = loop
        self.dim = loop.order
        self.names = loop.names
        self.unit = self.basis_vec(0)

    def mul_rows(self, a, b):
        a = self.field.canon(np.atleast_2d(np.asarray(a)))
        b = self.field.canon(np.atleast_2d(np.asarray(b)))
        t = self.loop.table
        blocks = []
        for i in range(a.shape[0]):
            u = a[i]
            block = _zeros(self.field, (b.shape[0], self.dim))
            for j in np.flatnonzero(u != 0):
                block[:, t[j]] = block[:, t[j]] + u[j] * b
            blocks.append(self.field.canon(block))
        return np.vstack(blocks) if blocks else a[:0]

    def mul_pairwise(self, a, b):
        a = self.field.canon(np.atleast_2d(np.asarray(a)))
        b = self.field.canon(np.atleast_2d(np.asarray(b)))
        t = self.loop.table
        out = _zeros(self.field, a.shape)
        for i in range(self.dim):
            col = a[:, i]
            if not col.any():
                continue
            out[:, t[i]] = out[:, t[i]] + col[:, None] * b
        return self.field.canon(out)

    def _perm_actions(self, dests):
        def make(dest):
            def act(m):
                out = np.empty_like(m)
                out[:, dest] = m
                return out
            return act
        return [make(d) for d in dests]

    def left_actions(self):
        t = self.loop.table
        return self._perm_actions([t[g] for g in range(self.dim)])

    def right_actions(self):
        t = self.loop.table
        return self._perm_actions([t[:, g] for g in range(self.dim)])


class TensorAlgebra(Algebra):
    """Algebra given by an explicit structure-constant tensor c[i,j,:]."""

    def __init__(self, field, tensor: np.ndarray, names: Sequence[str],
                 unit: Optional[np.ndarray] = None):
        self.field = field
        self.c = field.canon(np.asarray(tensor))
        self.dim = self.c.shape[0]
        if self.c.shape != (self.dim, self.dim, self.dim):
            raise DimensionMismatch("structure tensor must be cubic")
        self.names = tuple(names)
        self.unit = None if unit is None else field.canon(np.asarray(unit))

    def mul_rows(self, a, b):
        a = self.field.canon(np.atleast_2d(np.asarray(a)))
        b = self.field.canon(np.atleast_2d(np.asarray(b)))
        ac = self.field.canon(np.tensordot(a, self.c, axes=([1], [0])))   # [u, j, k]
        if self.field.dtype != object:
            out = np.einsum("vj,ujk->uvk", b, ac)
        else:
            out = np.empty((a.shape[0], b.shape[0], self.dim), dtype=object)
            for u in range(a.shape[0]):
                out[u] = np.dot(b, ac[u])
        return self.field.canon(out.reshape(a.shape[0] * b.shape[0], self.dim))

    def mul_pairwise(self, a, b):
        a = self.field.canon(np.atleast_2d(np.asarray(a)))
        b = self.field.canon(np.atleast_2d(np.asarray(b)))
        chunks = []
        step = max(1, 2_000_000 // max(self.dim * self.dim, 1))
        for s in range(0, a.shape[0], step):
            ac = self.field.canon(np.tensordot(a[s:s + step], self.c, axes=([1], [0])))
            bs = b[s:s + step]
            if self.field.dtype != object:
                chunks.append(self.field.canon(np.einsum("uj,ujk->uk", bs, ac)))
            else:
                block = np.empty((bs.shape[0], self.dim), dtype=object)
                for u in range(bs.shape[0]):
                    block[u] = np.dot(bs[u], ac[u])
                chunks.append(self.field.canon(block))
        return np.vstack(chunks) if chunks else a[:0]

    def mul_basis(self, i: int, j: int) -> np.ndarray:
        return self.c[i, j].copy()

    def left_actions(self):
        return [_matrix_action(self.field, self.c[g]) for g in range(self.dim)]

    def right_actions(self):
        return [_matrix_action(self.field, self.c[:, g]) for g in range(self.dim)]


def _matrix_action(field, w):
    def act(m):
        return field.canon(np.dot(m, w))
    return act


def loop_algebra(field, loop: Loop) -> LoopAlgebra:
    return LoopAlgebra(field, loop)


# -- alternator ideal and the alternative quotient --------------------------

def _alternator_seed_stream(alg: LoopAlgebra, include_diagonal: bool, pair_block: int = 64):
    """Deterministic generator stream for the alternator ideal.

    Yields row-matrix blocks of the linearised alternators
    (a,b,c)+(b,a,c) over a <= b (rows indexed by c) and (a,b,c)+(a,c,b) over
    b <= c (rows indexed by a), plus the diagonal alternators (a,a,c) and
    (c,a,a) that make the quotient alternative in characteristic 2 (they are
    spanned by the linearised ones otherwise).  Each yielded block covers
    pair_block symmetric pairs with the inner index fully vectorised.
    """
    t = alg.loop.table
    n = alg.dim

    def take(rows_of, along):
        return np.take_along_axis(rows_of, along, axis=1)

    pairs_upper = [(a, b) for a in range(n) for b in range(a, n)]
    for s in range(0, len(pairs_upper), pair_block):
        chunk = pairs_upper[s:s + pair_block]
        a = np.asarray([x for x, _ in chunk], dtype=np.int64)
        b = np.asarray([y for _, y in chunk], dtype=np.int64)
        # rows over c: (a,b,c)+(b,a,c)
        pos = (t[t[a, b]],                 # (ab)c
               take(t[a], t[b]),           # a(bc)
               t[t[b, a]],                 # (ba)c
               take(t[b], t[a]))           # b(ac)
        yield _scatter_block(n, pos, (1, -1, 1, -1))
    for s in range(0, len(pairs_upper), pair_block):
        chunk = pairs_upper[s:s + pair_block]
        b = np.asarray([x for x, _ in chunk], dtype=np.int64)
        c = np.asarray([y for _, y in chunk], dtype=np.int64)
        # rows over a: (a,b,c)+(a,c,b)
        pos = (t[t[:, b].T, c[:, None]],   # (ab)c
               t[:, t[b, c]].T,            # a(bc)
               t[t[:, c].T, b[:, None]],   # (ac)b
               t[:, t[c, b]].T)            # a(cb)
        yield _scatter_block(n, pos, (1, -1, 1, -1))
    if include_diagonal:
        idx = np.arange(n, dtype=np.int64)
        for s in range(0, n, pair_block):
            a = idx[s:s + pair_block]
            pos = (t[t[a, a]], take(t[a], t[a]))            # (a,a,c) over c
            yield _scatter_block(n, pos, (1, -1))
        for s in range(0, n, pair_block):
            a = idx[s:s + pair_block]
            pos = (t[t[:, a].T, a[:, None]],                # (ca)a over c
                   t[:, t[a, a]].T)                         # c(aa)
            yield _scatter_block(n, pos, (1, -1))


def _scatter_block(n: int, positions, signs) -> np.ndarray:
    """Signed basis hits, one generator row per (pair, inner index) slot."""
    k, width = positions[0].shape
    rows = k * width
    base = np.arange(rows, dtype=np.int64) * n
    total = np.zeros(rows * n, dtype=np.int64)
    for pos, sign in zip(positions, signs):
        counts = np.bincount(base + pos.ravel(), minlength=rows * n)
        total = total + sign * counts
    return total.reshape(rows, n)


def _accumulated(stream, rows_target: int):
    buf, count = [], 0
    for block in stream:
        buf.append(block)
        count += block.shape[0]
        if count >= rows_target:
            yield np.vstack(buf)
            buf, count = [], 0
    if buf:
        yield np.vstack(buf)


def alternator_ideal(alg: LoopAlgebra, include_diagonal: bool = True) -> Subspace:
    """Ideal of FQ generated by the (linearised + diagonal) alternators.

    By trilinearity of the associator the basis triples span all alternator
    values, so closing their span under left/right multiplication by basis
    elements yields the full ideal.  Zero output (associative loop) is valid.
    """
    if alg.field.dtype == object:
        stream = (alg.field.canon(b.astype(object))
                  for b in _alternator_seed_stream(alg, include_diagonal))
    else:
        stream = (alg.field.canon(b) for b in _alternator_seed_stream(alg, include_diagonal))
    return linalg.ideal_closure(
        _accumulated(stream, rows_target=2048),
        alg.left_actions(), alg.right_actions(),
        field=alg.field, ambient_dim=alg.dim)


class QuotientAlgebra(TensorAlgebra):
    """Quotient of an algebra by a verified ideal, in complement coordinates.

    Coordinates are the non-pivot columns of the ideal's echelon basis: the
    reduction of a vector modulo the ideal is supported exactly there, so
    reduce-then-restrict is a well-defined projection with a linear section.
    """

    def __init__(self, parent: Algebra, ideal: Subspace, verify: bool = True):
        if ideal.ambient_dim != parent.dim or ideal.field != parent.field:
            raise DimensionMismatch("ideal does not live in the parent algebra")
        if parent.unit is not None and ideal.contains(parent.unit):
            raise IdealNotProper("the unit lies in the ideal")
        if verify and ideal.dim:
            basis = ideal.basis_matrix()
            for g, act in enumerate(parent.left_actions()):
                if not ideal.contains_rows(act(basis)):
                    raise IdealNotStable(("left", g))
            for g, act in enumerate(parent.right_actions()):
                if not ideal.contains_rows(act(basis)):
                    raise IdealNotStable(("right", g))
        self.parent = parent
        self.ideal = ideal
        pivots = set(ideal.pivot_cols)
        self.section_cols = np.asarray(
            [j for j in range(parent.dim) if j not in pivots], dtype=np.int64)
        self.basis_images = ideal.reduce_rows(_eye(parent.field, parent.dim))[:, self.section_cols]
        qdim = parent.dim - ideal.dim
        if isinstance(parent, LoopAlgebra):
            t = parent.loop.table
            tensor = self.basis_images[t[np.ix_(self.section_cols, self.section_cols)]]
            names = tuple(parent.names[int(j)] for j in self.section_cols)
        else:
            reps = _eye(parent.field, parent.dim)[self.section_cols]
            prods = parent.mul_rows(reps, reps)
            tensor = ideal.reduce_rows(prods)[:, self.section_cols].reshape(qdim, qdim, qdim)
            names = tuple(f"q{int(j)}" for j in self.section_cols)
        unit = None
        if parent.unit is not None:
            unit = ideal.reduce(parent.unit)[self.section_cols]
        super().__init__(parent.field, tensor, names, unit=unit)
        self.loop = parent.loop if isinstance(parent, LoopAlgebra) else None

    def project(self, v: np.ndarray) -> np.ndarray:
        return self.ideal.reduce(v)[self.section_cols]

    def project_rows(self, m: np.ndarray) -> np.ndarray:
        return self.ideal.reduce_rows(m)[:, self.section_cols]

    def lift(self, v: np.ndarray) -> np.ndarray:
        out = self.field.zeros(self.parent.dim)
        out[self.section_cols] = v
        return out

    def lift_rows(self, m: np.ndarray) -> np.ndarray:
        m = np.atleast_2d(np.asarray(m))
        out = _zeros(self.field, (m.shape[0], self.parent.dim))
        out[:, self.section_cols] = m
        return out

    def mul_rows(self, a, b):
        if isinstance(self.parent, LoopAlgebra):
            return self.project_rows(self.parent.mul_rows(self.lift_rows(a), self.lift_rows(b)))
        return super().mul_rows(a, b)

    def mul_pairwise(self, a, b):
        if isinstance(self.parent, LoopAlgebra):
            return self.project_rows(
                self.parent.mul_pairwise(self.lift_rows(a), self.lift_rows(b)))
        return super().mul_pairwise(a, b)


def quotient_algebra(parent: Algebra, ideal: Subspace, verify: bool = True) -> QuotientAlgebra:
    return QuotientAlgebra(parent, ideal, verify=verify)


@dataclass
class AlternativeLoopAlgebra:
    """The alternative quotient FQ / I(Q) together with its canonical data."""

    loop: Loop
    field: object
    fq: LoopAlgebra
    alternator: Subspace
    algebra: QuotientAlgebra
    images: np.ndarray            # |Q| x dim projections of the loop basis
    canonical_injective: bool
    collision: Optional[tuple]    # (q, q') with equal images, if any
    omega: Subspace               # augmentation ideal inside the quotient
    diagonal_alternators: bool = True

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def unit_in_omega(self) -> bool:
        return self.omega.contains(self.algebra.unit)

    @property
    def omega_codim(self) -> int:
        return self.algebra.dim - self.omega.dim


def alternative_loop_algebra(field, loop: Loop,
                             include_diagonal: bool = True) -> AlternativeLoopAlgebra:
    """Build F[Q] = FQ / I(Q), its augmentation ideal, and injectivity data."""
    fq = loop_algebra(field, loop)
    ideal = alternator_ideal(fq, include_diagonal=include_diagonal)
    if ideal.contains(fq.unit):
        raise AlternatorIdealFull(
            f"alternator ideal of {loop.name} over {field!r} contains the unit")
    quot = QuotientAlgebra(fq, ideal, verify=False)  # closure output is action-stable
    collision = _first_duplicate_rows(quot.basis_images)
    omega = augmentation_ideal(quot)
    return AlternativeLoopAlgebra(
        loop=loop, field=field, fq=fq, alternator=ideal, algebra=quot,
        images=quot.basis_images, canonical_injective=collision is None,
        collision=collision, omega=omega, diagonal_alternators=include_diagonal)


def _first_duplicate_rows(m: np.ndarray) -> Optional[tuple]:
    seen: dict = {}
    for i in range(m.shape[0]):
        key = tuple(m[i].tolist())
        if key in seen:
            return (seen[key], i)
        seen[key] = i
    return None


# -- alternativity checks ----------------------------------------------------

@dataclass
class AlternativeReport:
    ok: bool
    mode: str
    witness: Optional[tuple] = None
    samples: Optional[int] = None
    seed: Optional[int] = None

    def to_json(self):
        return {
            "ok": self.ok,
            "mode": self.mode,
            "samples": self.samples,
            "seed": self.seed,
            "witness": None if self.witness is None else list(self.witness),
        }


def alternative_check(alg: Algebra, mode: str = "auto", samples: int = 10**4,
                      seed: int = DEFAULT_SEED) -> AlternativeReport:
    """Check the alternative laws (x,x,y) = (y,x,x) = 0.

    Exhaustive mode verifies the linearised alternators on basis triples and
    the diagonal ones on basis pairs, which implies the laws for arbitrary
    elements by bilinear expansion in every characteristic.  Loop algebras
    use their alternator generator stream; dense tensors are checked directly
    up to a size bound; everything else is sampled on random vectors.
    """
    if mode == "auto":
        if isinstance(alg, LoopAlgebra) and alg.dim ** 3 <= 10**7:
            mode = "exhaustive"
        elif not isinstance(alg, (LoopAlgebra, QuotientAlgebra)) and alg.dim <= 32:
            mode = "exhaustive"
        else:
            mode = "sampled"
    if mode == "exhaustive":
        if isinstance(alg, LoopAlgebra):
            offset = 0
            for block in _alternator_seed_stream(alg, include_diagonal=True):
                block = alg.field.canon(block)
                bad = np.flatnonzero(block.any(axis=1))
                if bad.size:
                    return AlternativeReport(ok=False, mode="exhaustive",
                                             witness=("generator", offset + int(bad[0])))
                offset += block.shape[0]
            return AlternativeReport(ok=True, mode="exhaustive")
        if isinstance(alg, TensorAlgebra) and not isinstance(alg, QuotientAlgebra):
            basis = _eye(alg.field, alg.dim)
            for a in range(alg.dim):
                ea = basis[a]
                for b in range(alg.dim):
                    sym = alg.field.canon(_assoc_rows(alg, ea, basis[b], basis)
                                          + _assoc_rows(alg, basis[b], ea, basis))
                    if sym.any():
                        c = int(np.flatnonzero(sym.any(axis=1))[0])
                        return AlternativeReport(ok=False, mode="exhaustive", witness=(a, b, c))
                diag = _assoc_rows(alg, ea, ea, basis)
                if diag.any():
                    c = int(np.flatnonzero(diag.any(axis=1))[0])
                    return AlternativeReport(ok=False, mode="exhaustive", witness=(a, a, c))
                tail = _assoc_tail(alg, basis, ea)
                if tail.any():
                    c = int(np.flatnonzero(tail.any(axis=1))[0])
                    return AlternativeReport(ok=False, mode="exhaustive", witness=(c, a, a))
            return AlternativeReport(ok=True, mode="exhaustive")
        raise DimensionBoundExceeded("exhaustive alternativity check unsupported here")
    rng = np.random.default_rng(seed)
    xs = _random_rows(alg, rng, samples)
    ys = _random_rows(alg, rng, samples)
    xx = alg.mul_pairwise(xs, xs)
    lhs = alg.field.canon(alg.mul_pairwise(xx, ys) - alg.mul_pairwise(xs, alg.mul_pairwise(xs, ys)))
    rhs = alg.field.canon(alg.mul_pairwise(ys, xx) - alg.mul_pairwise(alg.mul_pairwise(ys, xs), xs))
    bad = np.flatnonzero(lhs.any(axis=1) | rhs.any(axis=1))
    if bad.size:
        return AlternativeReport(ok=False, mode="sampled", witness=(int(bad[0]),),
                                 samples=samples, seed=seed)
    return AlternativeReport(ok=True, mode="sampled", samples=samples, seed=seed)


def _assoc_rows(alg: TensorAlgebra, ea, eb, basis):
    """Associator (a, b, c) for all basis c, as rows."""
    ab = alg.mul(ea, eb)
    lhs = alg.field.canon(np.tensordot(ab, alg.c, axes=([0], [0])))     # (ab)c over c
    bc = alg.field.canon(np.tensordot(eb, alg.c, axes=([0], [0])))      # b*c over c
    rhs = alg.mul_rows(ea.reshape(1, -1), bc).reshape(alg.dim, alg.dim)
    return alg.field.canon(lhs - rhs)


def _assoc_tail(alg: TensorAlgebra, basis, ea):
    """Associator (c, a, a) for all basis c, as rows."""
    aa = alg.mul(ea, ea)
    lhs_parts = alg.mul_rows(basis, ea.reshape(1, -1))                  # c*a over c
    lhs = alg.mul_rows(lhs_parts, ea.reshape(1, -1)).reshape(alg.dim, alg.dim)
    rhs = alg.mul_rows(basis, aa.reshape(1, -1)).reshape(alg.dim, alg.dim)
    return alg.field.canon(lhs - rhs)


def _random_rows(alg: Algebra, rng, k: int) -> np.ndarray:
    if isinstance(alg.field, PrimeField):
        return rng.integers(0, alg.field.p, size=(k, alg.dim), dtype=np.int64)
    raw = rng.integers(-9, 10, size=(k, alg.dim))
    out = np.empty((k, alg.dim), dtype=object)
    for i in range(k):
        for j in range(alg.dim):
            out[i, j] = Fraction(int(raw[i, j]))
    return out


def associative_check_sampled(alg: Algebra, samples: int = 10**4,
                              seed: int = DEFAULT_SEED) -> AlternativeReport:
    """Sampled check of full associativity (x,y,z) = 0 on random triples."""
    rng = np.random.default_rng(seed)
    xs = _random_rows(alg, rng, samples)
    ys = _random_rows(alg, rng, samples)
    zs = _random_rows(alg, rng, samples)
    lhs = alg.mul_pairwise(alg.mul_pairwise(xs, ys), zs)
    rhs = alg.mul_pairwise(xs, alg.mul_pairwise(ys, zs))
    bad = np.flatnonzero(alg.field.canon(lhs - rhs).any(axis=1))
    if bad.size:
        return AlternativeReport(ok=False, mode="sampled", witness=(int(bad[0]),),
                                 samples=samples, seed=seed)
    return AlternativeReport(ok=True, mode="sampled", samples=samples, seed=seed)


# -- augmentation ideals ----------------------------------------------------

def augmentation_ideal(alg: Algebra, sub: Optional[SubloopSet] = None) -> Subspace:
    """Ideal generated by e - h for h in the subloop (default: whole loop).

    For a plain loop algebra with H = Q the result is cross-checked against
    the zero-coefficient-sum hyperplane, which it must equal.
    """
    if isinstance(alg, LoopAlgebra):
        members = sub.members if sub is not None else tuple(range(alg.loop.order))
        gens = _zeros(alg.field, (len(members), alg.dim))
        for k, h in enumerate(members):
            gens[k, 0] = gens[k, 0] + 1
            gens[k, h] = gens[k, h] - 1
        out = linalg.ideal_closure([alg.field.canon(gens)], alg.left_actions(),
                                   alg.right_actions(), field=alg.field, ambient_dim=alg.dim)
        if len(members) == alg.loop.order:
            if not (out == _zero_sum_hyperplane(alg)):
                raise IdealNotStable("augmentation ideal differs from the zero-sum hyperplane")
        return out
    if isinstance(alg, QuotientAlgebra) and alg.loop is not None:
        members = sub.members if sub is not None else tuple(range(alg.loop.order))
        imgs = alg.basis_images
        gens = alg.field.canon(imgs[0][None, :] - imgs[np.asarray(members, dtype=np.int64)])
        return linalg.ideal_closure([gens], alg.left_actions(), alg.right_actions(),
                                    field=alg.field, ambient_dim=alg.dim)
    raise DimensionMismatch("augmentation ideal needs a loop-backed algebra")


def _zero_sum_hyperplane(alg: LoopAlgebra) -> Subspace:
    n = alg.dim
    rows = _zeros(alg.field, (n - 1, n))
    for k in range(1, n):
        rows[k - 1, 0] = rows[k - 1, 0] + 1
        rows[k - 1, k] = rows[k - 1, k] - 1
    return linalg.span_rows(alg.field, n, alg.field.canon(rows))


# -- unitization -------------------------------------------------------------

class UnitizedAlgebra(TensorAlgebra):
    """A# = A ⊕ Fe for a multiplicatively closed carrier in an ambient algebra.

    Coordinates 0..s-1 are the carrier's echelon basis, coordinate s is the
    adjoined unit; the last-coordinate functional is a unital homomorphism
    onto F whose kernel is the embedded carrier.
    """

    def __init__(self, ambient: Algebra, carrier: Subspace):
        if carrier.ambient_dim != ambient.dim:
            raise DimensionMismatch("carrier does not live in the ambient algebra")
        field = ambient.field
        s = carrier.dim
        tensor = _zeros(field, (s + 1, s + 1, s + 1))
        if s:
            basis = carrier.basis_matrix()
            prods = ambient.mul_rows(basis, basis)
            if not carrier.contains_rows(prods):
                raise IdealNotStable("carrier is not multiplicatively closed")
            prods = prods.reshape(s, s, ambient.dim)
            for i in range(s):
                for j in range(s):
                    tensor[i, j, :s] = carrier.coords(prods[i, j])
        for i in range(s + 1):
            tensor[i, s, i] = tensor[i, s, i] + 1
            if i < s:
                tensor[s, i, i] = tensor[s, i, i] + 1
        unit = field.zeros(s + 1)
        unit[s] = field.one
        names = tuple([f"r{i}" for i in range(s)] + ["e"])
        super().__init__(field, tensor, names, unit=unit)
        self.ambient = ambient
        self.carrier = carrier
        self.unit_index = s

    def embed(self, v: np.ndarray) -> np.ndarray:
        out = self.field.zeros(self.dim)
        if self.dim > 1:
            out[: self.dim - 1] = self.carrier.coords(v)
        return out

    def pi(self, v: np.ndarray):
        """The unital homomorphism A# -> F (coefficient of the unit)."""
        return v[self.unit_index]


def unitize(ambient: Algebra, carrier: Subspace) -> UnitizedAlgebra:
    return UnitizedAlgebra(ambient, carrier)


# -- inverses, quasiinverses, circle ----------------------------------------

def left_mult_matrix(alg: Algebra, u: np.ndarray) -> np.ndarray:
    """Matrix with column j = u * e_j."""
    return alg.mul_rows(np.asarray(u).reshape(1, -1), _eye(alg.field, alg.dim)).T


def right_mult_matrix(alg: Algebra, u: np.ndarray) -> np.ndarray:
    """Matrix with column j = e_j * u."""
    return alg.mul_rows(_eye(alg.field, alg.dim), np.asarray(u).reshape(1, -1)).T


def invert(alg: Algebra, u: np.ndarray) -> Optional[np.ndarray]:
    """Two-sided inverse of u, or None; raises if one-sided inverses differ."""
    if alg.unit is None:
        raise ValueError("invert needs a unital algebra")
    u = alg.field.canon(np.asarray(u))
    x = linalg.solve_matrix(left_mult_matrix(alg, u), alg.unit, alg.field)
    y = linalg.solve_matrix(right_mult_matrix(alg, u), alg.unit, alg.field)
    if x is None or y is None:
        return None
    if not np.array_equal(x, y):
        raise SidedInverseMismatch(u)
    return x


def quasiinverse(alg: Algebra, a: np.ndarray) -> Optional[np.ndarray]:
    """a* with a + a* = a a* = a* a, via invertibility of e - a."""
    if alg.unit is None:
        raise ValueError("quasiinverse needs a unital algebra")
    a = alg.field.canon(np.asarray(a))
    w = invert(alg, alg.field.canon(alg.unit - a))
    if w is None:
        return None
    return alg.field.canon(alg.unit - w)


def circle(alg: Algebra, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return alg.field.canon(np.asarray(a) + np.asarray(b) - alg.mul(a, b))


def circle_pairwise(alg: Algebra, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return alg.field.canon(a + b - alg.mul_pairwise(a, b))


def enumerate_carrier(alg: Algebra, carrier: Subspace):
    """All carrier elements in lexicographic coefficient order (zero first)."""
    if not isinstance(alg.field, PrimeField):
        raise UnsupportedRadical("carrier enumeration needs a finite field")
    p = alg.field.p
    if p ** carrier.dim > CIRCLE_ENUM_BOUND:
        raise DimensionBoundExceeded(
            f"carrier has {p}^{carrier.dim} elements, beyond the enumeration bound")
    basis = carrier.basis_matrix()
    for coeffs in itertools.product(range(p), repeat=carrier.dim):
        cv = np.asarray(coeffs, dtype=np.int64)
        v = alg.field.canon(cv @ basis) if carrier.dim else alg.field.zeros(alg.dim)
        yield cv, v


class CircleOracleLoop(Loop):
    """Circle loop on a carrier too large to tabulate.

    Indices encode coefficient tuples over the carrier basis in base p with
    the zero vector (the ∘-identity) at index 0; indices are arbitrary
    precision since the carrier may have far more than 2^63 elements.
    Divisions go through the quasiinverse, which is valid because circle
    loops of alternative algebras have the inverse property.
    """

    def __init__(self, alg: Algebra, carrier: Subspace, name: str = "circle"):
        if not isinstance(alg.field, PrimeField):
            raise UnsupportedRadical("oracle circle loop needs a finite field")
        self.alg = alg
        self.carrier = carrier
        self.order = alg.field.p ** carrier.dim
        self.name = name
        self.names = None
        self.table = None
        self._props = {}
        self._ncl_cache = {}
        self._normal_lattice = None
        self._basis = carrier.basis_matrix()
        self._pivot_cols = np.asarray(carrier.pivot_cols, dtype=np.int64)

    def _decode(self, i: int) -> np.ndarray:
        p = self.alg.field.p
        coeffs = np.zeros(self.carrier.dim, dtype=np.int64)
        i = int(i)
        for k in range(self.carrier.dim - 1, -1, -1):
            i, r = divmod(i, p)
            coeffs[k] = r
        return self.alg.field.canon(coeffs @ self._basis)

    def _encode(self, v: np.ndarray) -> int:
        out = 0
        for c in v[self._pivot_cols]:
            out = out * self.alg.field.p + int(c)
        return out

    def mul(self, a: int, b: int) -> int:
        return self._encode(circle(self.alg, self._decode(a), self._decode(b)))

    def mul_array(self, a, b):
        a = np.asarray(a, dtype=object)
        b = np.asarray(b, dtype=object)
        flat = [self.mul(int(x), int(y)) for x, y in zip(a.ravel(), b.ravel())]
        return np.asarray(flat, dtype=object).reshape(a.shape)

    def _quasi(self, a: int) -> int:
        q = quasiinverse(self.alg, self._decode(a))
        if q is None:
            raise NotQuasiregular(a)
        return self._encode(q)

    def ldiv(self, a: int, b: int) -> int:
        return self.mul(self._quasi(a), b)

    def rdiv(self, b: int, a: int) -> int:
        return self.mul(b, self._quasi(a))

    def inv(self, x: int) -> int:
        return self._quasi(x)

    def inverses(self):
        raise DimensionBoundExceeded("oracle circle loop does not enumerate inverses")

    def element_orders(self):
        raise DimensionBoundExceeded("oracle circle loop does not enumerate orders")

    def element_name(self, i: int) -> str:
        return f"u{i}"

    def has_table(self) -> bool:
        return False


def circle_loop(alg: Algebra, carrier: Subspace, name: str = "circle") -> Loop:
    """The loop (carrier, ∘); dense when small, oracle-backed otherwise.

    Elements of a materialised carrier must all be quasiregular; hitting a
    non-quasiregular member is an error, not a degenerate loop.
    """
    if not isinstance(alg.field, PrimeField):
        raise UnsupportedRadical("circle loops need a finite field carrier")
    count = alg.field.p ** carrier.dim
    if count > CIRCLE_TABLE_BOUND:
        return CircleOracleLoop(alg, carrier, name=name)
    elems = []
    index = {}
    for coeffs, v in enumerate_carrier(alg, carrier):
        if quasiinverse(alg, v) is None:
            raise NotQuasiregular(tuple(int(c) for c in coeffs))
        index[tuple(v.tolist())] = len(elems)
        elems.append(v)
    n = len(elems)
    table = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            table[i, j] = index[tuple(circle(alg, elems[i], elems[j]).tolist())]
    names = ["0"] + [f"u{i}" for i in range(1, n)]
    loop = Loop(names, table, name=name)
    loop.circle_elements = elems
    return loop


@dataclass
class CircleIsoReport:
    eta_ok: bool
    phi_ok: bool
    mode: str
    pairs: int
    seed: Optional[int] = None

    @property
    def ok(self):
        return self.eta_ok and self.phi_ok

    def to_json(self):
        return {"eta_ok": self.eta_ok, "phi_ok": self.phi_ok, "mode": self.mode,
                "pairs": self.pairs, "seed": self.seed}


def circle_iso_check(alg: Algebra, carrier: Subspace, samples: int = 10**5,
                     seed: int = DEFAULT_SEED) -> CircleIsoReport:
    """Verify (e-a)(e-b) = e - a∘b and -(a∘b) = (-a)⊗(-b) on carrier pairs."""
    if alg.unit is None:
        raise ValueError("circle isomorphism checks need a unital algebra")
    count = alg.field.p ** carrier.dim if isinstance(alg.field, PrimeField) else None
    if count is not None and count * count <= 2**16:
        elems = np.vstack([v for _, v in enumerate_carrier(alg, carrier)])
        k = elems.shape[0]
        a = elems[np.repeat(np.arange(k), k)]
        b = elems[np.tile(np.arange(k), k)]
        mode, pairs, used_seed = "exhaustive", k * k, None
    else:
        rng = np.random.default_rng(seed)
        basis = carrier.basis_matrix()
        ca = rng.integers(0, alg.field.p, size=(samples, carrier.dim), dtype=np.int64)
        cb = rng.integers(0, alg.field.p, size=(samples, carrier.dim), dtype=np.int64)
        a = alg.field.canon(ca @ basis)
        b = alg.field.canon(cb @ basis)
        mode, pairs, used_seed = "sampled", samples, seed
    ab = alg.mul_pairwise(a, b)
    circ = alg.field.canon(a + b - ab)
    e = alg.unit[None, :]
    lhs = alg.mul_pairwise(alg.field.canon(e - a), alg.field.canon(e - b))
    eta_ok = bool(not alg.field.canon(lhs - (e - circ)).any())
    otimes = alg.field.canon(ab - a - b)       # (-a)(-b) + (-a) + (-b)
    phi_ok = bool(not alg.field.canon(otimes + circ).any())
    return CircleIsoReport(eta_ok=eta_ok, phi_ok=phi_ok, mode=mode, pairs=pairs, seed=used_seed)


# -- nilpotency and the quasiregular radical --------------------------------

def nilpotency_index(carrier: Subspace, alg: Algebra,
                     max_steps: Optional[int] = None) -> Optional[int]:
    """Least n with carrier^n = 0 under all-bracketings powers, else None."""
    return linalg.nilpotency_index(carrier, alg.mul_rows, max_steps=max_steps)


def is_quasiregular_element(alg: Algebra, x: np.ndarray) -> bool:
    """Solvability of x + b - xb = x + b - bx = 0 as one stacked linear system."""
    f = alg.field
    x = f.canon(np.asarray(x))
    eye = _eye(f, alg.dim)
    a = np.vstack([f.canon(eye - left_mult_matrix(alg, x)),
                   f.canon(eye - right_mult_matrix(alg, x))])
    rhs = np.concatenate([f.canon(-x), f.canon(-x)])
    return linalg.solve_matrix(a, rhs, f) is not None


def principal_ideal(alg: Algebra, v: np.ndarray) -> Subspace:
    return linalg.ideal_closure([alg.field.canon(np.asarray(v)).reshape(1, -1)],
                                alg.left_actions(), alg.right_actions(),
                                field=alg.field, ambient_dim=alg.dim)


def radical_zhevlakov(alg: Optional[Algebra] = None,
                      bundle: Optional[AlternativeLoopAlgebra] = None) -> Subspace:
    """Largest quasiregular ideal, in the two supported regimes.

    (i) For an alternative loop-algebra quotient whose augmentation ideal
    misses the unit, the radical is that augmentation ideal: its generators
    e - q are quasiregular (q is invertible) and every proper ideal is an
    augmentation ideal of a normal subloop.
    (ii) For small algebras over a finite field, brute force: join every
    principal ideal consisting entirely of quasiregular elements, then verify
    that no nonzero quasiregular principal ideal survives in the quotient.
    """
    if bundle is not None:
        if bundle.unit_in_omega:
            raise UnsupportedRadical("unit lies in the augmentation ideal; case (i) unavailable")
        for row in bundle.omega.basis_matrix():
            if not is_quasiregular_element(bundle.algebra, row):
                raise UnsupportedRadical("augmentation basis row is not quasiregular")
        return bundle.omega
    if alg is None:
        raise ValueError("pass an algebra or a loop-algebra bundle")
    if not isinstance(alg.field, PrimeField) or alg.field.p ** alg.dim > RADICAL_ENUM_BOUND:
        raise UnsupportedRadical("brute-force radical needs a small finite-field algebra")
    everything = linalg.span_rows(alg.field, alg.dim, _eye(alg.field, alg.dim))
    rad = Subspace(alg.field, alg.dim)
    for _, v in enumerate_carrier(alg, everything):
        if not v.any() or rad.contains(v):
            continue
        ide = principal_ideal(alg, v)
        if _all_quasiregular(alg, ide):
            stacked = np.vstack([rad.basis_matrix(), ide.basis_matrix()]) if rad.dim \
                else ide.basis_matrix()
            rad = linalg.span_rows(alg.field, alg.dim, stacked)
    if rad.dim < alg.dim and (alg.unit is None or not rad.contains(alg.unit)):
        quot = QuotientAlgebra(alg, rad, verify=False)
        full_q = linalg.span_rows(quot.field, quot.dim, _eye(quot.field, quot.dim))
        for _, v in enumerate_carrier(quot, full_q):
            if not v.any():
                continue
            ide = principal_ideal(quot, v)
            if ide.dim and _all_quasiregular(quot, ide):
                raise UnsupportedRadical("quotient retains a quasiregular principal ideal")
    return rad


def _all_quasiregular(alg: Algebra, sub: Subspace) -> bool:
    if alg.field.p ** sub.dim > RADICAL_ENUM_BOUND:
        raise UnsupportedRadical("quasiregularity enumeration too large")
    for _, v in enumerate_carrier(alg, sub):
        if not is_quasiregular_element(alg, v):
            return False
    return True


# -- nil subalgebra identities ----------------------------------------------

def _geometric_unit_sum(alg: Algebra, x: np.ndarray, m: int) -> np.ndarray:
    # e + x + x^2 + ... + x^{m-1}; the inverse of e - x when x^m = 0
    out = alg.unit.copy()
    acc = None
    for _ in range(1, m):
        acc = x if acc is None else alg.mul(acc, x)
        out = alg.field.canon(out + acc)
    return out


def nil_closed_form_check(alg: Algebra, u, v, w, m: int) -> bool:
    """Closed forms for the loop associator/commutator of e-u, e-v, e-w.

    Requires u^m = v^m = w^m = 0.  With S_x = e + x + ... + x^{m-1}
    (the inverse of e - x) this checks, exactly,
        [e-u, e-v, e-w] = e - ((S_w S_v) S_u)(u,v,w)
        [e-u, e-v]      = e + (S_u S_v)(u,v)
    where [a,b,c] = (a·bc)^{-1}(ab·c), [a,b] = (a^{-1}b^{-1})(ab), and
    (u,v,w), (u,v) are the algebra associator and commutator.
    """
    f = alg.field
    u, v, w = (f.canon(np.asarray(t)) for t in (u, v, w))
    for t in (u, v, w):
        if alg.power(t, m).any():
            raise NotNil("input power does not vanish")
    e = alg.unit
    a, b, c = f.canon(e - u), f.canon(e - v), f.canon(e - w)
    su, sv, sw = (_geometric_unit_sum(alg, t, m) for t in (u, v, w))
    p = alg.mul(a, alg.mul(b, c))
    p_inv = invert(alg, p)
    if p_inv is None:
        return False
    lhs = alg.mul(p_inv, alg.mul(alg.mul(a, b), c))
    rhs = f.canon(e - alg.mul(alg.mul(alg.mul(sw, sv), su), alg.associator(u, v, w)))
    if not np.array_equal(lhs, rhs):
        return False
    lhs2 = alg.mul(alg.mul(su, sv), alg.mul(a, b))
    rhs2 = f.canon(e + alg.mul(alg.mul(su, sv), alg.commutator(u, v)))
    return bool(np.array_equal(lhs2, rhs2))
