"""Axiom checkers for braces, bi-braces and the gamma homomorphism.

A check runs either exhaustively over all of V (tables indexed by the
lexicographic position of each vector) or on seeded random samples.  Both
modes evaluate the same axiom formulas through a small "operations" object,
and report the first counterexample in scan order.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import (
    AlgebraSpec,
    StructureConstantAlgebra,
    circle,
    circle_inverse,
    gamma_batch,
    space_elements,
    vector_index,
)
from .errors import TooLargeForExhaustive
from .gf import GF

__all__ = [
    "EXHAUSTIVE_LIMIT",
    "BraceCandidate",
    "Verdict",
    "check_bibrace",
    "check_left_brace",
    "check_right_brace",
    "circle_exponent_check",
    "gamma_homomorphism_check",
]

EXHAUSTIVE_LIMIT = 3**6
DEFAULT_SAMPLES = 2000


@dataclass(frozen=True)
class Verdict:
    passed: bool
    axiom: str
    witness: list[list[int]] | None
    mode: str
    seed: int | None
    detail: dict = dc_field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class BraceCandidate:
    """V = F^n with its vector addition and a candidate operation o.

    ``circ`` maps two stacks of vectors to a stack of vectors.  ``inverse``,
    when known, gives the o-inverse of a stack; without it, sampled mode
    cannot test the inverse axiom (exhaustive mode searches the table).
    """

    field: GF
    n: int
    circ: Callable[[np.ndarray, np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = "candidate"

    @property
    def size(self) -> int:
        return self.field.q**self.n

    @classmethod
    def from_algebra(cls, alg: AlgebraSpec | StructureConstantAlgebra) -> BraceCandidate:
        """a o b = a + b + a . b, with the o-inverse -a + a^2 - a^3 + ..."""
        F = alg.field

        def circ(x, y):
            return circle(x, y, alg)

        def inverse(x):
            return circle_inverse(x, alg)

        return cls(F, alg.n, circ, inverse, name="algebra")

    @classmethod
    def trivial(cls, field: GF, n: int) -> BraceCandidate:
        """o = +, the trivial brace."""
        return cls(field, n, field.add, field.neg, name="trivial")

    @classmethod
    def from_table(cls, field: GF, n: int, table) -> BraceCandidate:
        """Operation given by an N x N table of vector positions."""
        E = space_elements(field, n)
        table = np.asarray(table, dtype=np.int64)
        if table.shape != (len(E), len(E)):
            raise ValueError(f"table must have shape {(len(E), len(E))}")

        def circ(x, y):
            i = vector_index(field, x)
            j = vector_index(field, y)
            return E[table[i, j] % len(E)]

        cand = cls(field, n, circ, None, name="table")
        object.__setattr__(cand, "_table", table)
        return cand

    def table(self) -> np.ndarray:
        """N x N table of o on vector positions."""
        cached = getattr(self, "_table", None)
        if cached is not None:
            return cached
        E = space_elements(self.field, self.n)
        if self.size > EXHAUSTIVE_LIMIT:
            raise TooLargeForExhaustive(f"|V| = {self.size} exceeds {EXHAUSTIVE_LIMIT}")
        rows = [vector_index(self.field, self.circ(E[a], E)) for a in range(len(E))]
        return np.array(rows, dtype=np.int64)


# -- operation back ends ---------------------------------------------------


class _TableOps:
    def __init__(self, field: GF, n: int, circ_table: np.ndarray):
        E = space_elements(field, n)
        N = len(E)
        self.E = E
        self.N = N
        self.zero = 0
        self.add_t = vector_index(field, field.add(E[:, None, :], E[None, :, :]))
        self.neg_t = vector_index(field, field.neg(E))
        self.circ_t = circ_table
        self.in_range = bool(((circ_table >= 0) & (circ_table < N)).all())
        is_zero = circ_table == 0
        self.has_inv = is_zero.any(axis=1)
        self.cinv_t = np.where(self.has_inv, np.argmax(is_zero, axis=1), 0)

    def add(self, x, y):
        return self.add_t[x, y]

    def neg(self, x):
        return self.neg_t[x]

    def circ(self, x, y):
        return self.circ_t[x, y]

    def cinv(self, x):
        return self.cinv_t[x]

    @staticmethod
    def eq(x, y):
        return x == y

    def show(self, x) -> list[int]:
        return self.E[int(x)].tolist()


class _VectorOps:
    def __init__(self, cand: BraceCandidate):
        self.F = cand.field
        self.cand = cand
        self.zero = np.zeros(cand.n, dtype=np.int64)

    def add(self, x, y):
        return self.F.add(x, y)

    def neg(self, x):
        return self.F.neg(x)

    def circ(self, x, y):
        return self.cand.circ(x, y)

    def cinv(self, x):
        return self.cand.inverse(x)

    @staticmethod
    def eq(x, y):
        return np.all(np.asarray(x) == np.asarray(y), axis=-1)

    @staticmethod
    def show(x) -> list[int]:
        return np.asarray(x).tolist()


class _Swapped:
    """View with the two operations exchanged: (V, o, +)."""

    def __init__(self, ops):
        self.ops = ops
        self.zero = ops.zero
        self.eq = ops.eq
        self.show = ops.show

    def add(self, x, y):
        return self.ops.circ(x, y)

    def neg(self, x):
        return self.ops.cinv(x)

    def circ(self, x, y):
        return self.ops.add(x, y)

    def cinv(self, x):
        return self.ops.neg(x)


# -- axiom formulas: each returns a boolean "holds" mask -------------------


def _ax_identity(o, a):
    return o.eq(o.circ(o.zero, a), a) & o.eq(o.circ(a, o.zero), a)


def _ax_inverse(o, a):
    inv = o.cinv(a)
    return o.eq(o.circ(a, inv), o.zero) & o.eq(o.circ(inv, a), o.zero)


def _ax_commutativity(o, a, b):
    return o.eq(o.circ(a, b), o.circ(b, a))


def _ax_associativity(o, a, b, c):
    return o.eq(o.circ(o.circ(a, b), c), o.circ(a, o.circ(b, c)))


def _ax_left(o, a, b, c):
    # a o (b + c) = a o b - a + a o c
    lhs = o.circ(a, o.add(b, c))
    rhs = o.add(o.add(o.circ(a, b), o.neg(a)), o.circ(a, c))
    return o.eq(lhs, rhs)


def _ax_right(o, a, b, c):
    # (a + b) o c = a o c - c + b o c
    lhs = o.circ(o.add(a, b), c)
    rhs = o.add(o.add(o.circ(a, c), o.neg(c)), o.circ(b, c))
    return o.eq(lhs, rhs)


_UNARY = [("identity", _ax_identity), ("inverse", _ax_inverse)]
_BINARY = [("commutativity", _ax_commutativity)]


def _triple_axioms(side: str):
    axioms = [("associativity", _ax_associativity)]
    if side in ("left", "both"):
        axioms.append(("left_brace", _ax_left))
    if side in ("right", "both"):
        axioms.append(("right_brace", _ax_right))
    return axioms


def _run_exhaustive(o, N: int, triple_axioms, prefix: str = "", group_axioms: bool = True):
    """First failing (axiom, witness) or None, scanning positions in order."""
    idx = np.arange(N)
    if group_axioms:
        for name, ax in _UNARY:
            bad = np.flatnonzero(~ax(o, idx))
            if bad.size:
                return prefix + name, [o.show(bad[0])]
        for name, ax in _BINARY:
            bad = np.argwhere(~ax(o, idx[:, None], idx[None, :]))
            if bad.size:
                return prefix + name, [o.show(v) for v in bad[0]]
    for name, ax in triple_axioms:
        for a in range(N):
            bad = np.argwhere(~ax(o, a, idx[:, None], idx[None, :]))
            if bad.size:
                return prefix + name, [o.show(a)] + [o.show(v) for v in bad[0]]
    return None


def _run_sampled(o, samples, triple_axioms, prefix: str = "", group_axioms: bool = True, inverse_known=True):
    a, b, c = samples
    if group_axioms:
        for name, ax in _UNARY:
            if name == "inverse" and not inverse_known:
                continue
            bad = np.flatnonzero(~ax(o, a))
            if bad.size:
                return prefix + name, [o.show(a[bad[0]])]
        for name, ax in _BINARY:
            bad = np.flatnonzero(~ax(o, a, b))
            if bad.size:
                return prefix + name, [o.show(a[bad[0]]), o.show(b[bad[0]])]
    for name, ax in triple_axioms:
        bad = np.flatnonzero(~ax(o, a, b, c))
        if bad.size:
            i = bad[0]
            return prefix + name, [o.show(a[i]), o.show(b[i]), o.show(c[i])]
    return None


def _draw(field: GF, n: int, seed: int, samples: int):
    rng = np.random.default_rng(seed)
    return tuple(field.random(rng, (samples, n)) for _ in range(3))


def _table_ops(cand: BraceCandidate):
    if cand.size > EXHAUSTIVE_LIMIT:
        raise TooLargeForExhaustive(f"|V| = {cand.size} exceeds {EXHAUSTIVE_LIMIT} for exhaustive mode")
    return _TableOps(cand.field, cand.n, cand.table())


def _check(cand: BraceCandidate, side: str, mode: str, seed: int, samples: int) -> Verdict:
    axiom_label = {"left": "left_brace", "right": "right_brace", "both": "two_sided_brace"}[side]
    if mode == "exhaustive":
        o = _table_ops(cand)
        if not o.in_range:
            bad = np.argwhere((cand.table() < 0) | (cand.table() >= o.N))[0]
            return Verdict(False, "closure", [o.show(bad[0]), o.show(bad[1])], mode, None)
        failure = _run_exhaustive(o, o.N, _triple_axioms(side))
        used_seed = None
    elif mode == "sampled":
        o = _VectorOps(cand)
        failure = _run_sampled(
            o, _draw(cand.field, cand.n, seed, samples), _triple_axioms(side), inverse_known=cand.inverse is not None
        )
        used_seed = seed
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if failure:
        return Verdict(False, failure[0], failure[1], mode, used_seed)
    return Verdict(True, axiom_label, None, mode, used_seed)


def check_left_brace(
    cand: BraceCandidate, mode: str = "exhaustive", seed: int = 0, samples: int = DEFAULT_SAMPLES
) -> Verdict:
    """(V, o) abelian group plus a o (b + c) = a o b - a + a o c."""
    return _check(cand, "left", mode, seed, samples)


def check_right_brace(
    cand: BraceCandidate, mode: str = "exhaustive", seed: int = 0, samples: int = DEFAULT_SAMPLES
) -> Verdict:
    """(V, o) abelian group plus (a + b) o c = a o c - c + b o c."""
    return _check(cand, "right", mode, seed, samples)


def check_bibrace(
    alg: StructureConstantAlgebra | AlgebraSpec,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
) -> Verdict:
    """Both (V, +, o) and (V, o, +) are two-sided braces.

    The verdict's detail records the nilpotency index of the algebra and
    whether "passes" agrees with "V^3 = 0".
    """
    from .algebra import nilpotency_check

    cand = BraceCandidate.from_algebra(alg)
    if mode == "exhaustive":
        o = _table_ops(cand)
        failure = _run_exhaustive(o, o.N, _triple_axioms("both"))
        if failure is None:
            failure = _run_exhaustive(_Swapped(o), o.N, _triple_axioms("both")[1:], "swapped.", False)
        used_seed = None
    elif mode == "sampled":
        o = _VectorOps(cand)
        draws = _draw(cand.field, cand.n, seed, samples)
        failure = _run_sampled(o, draws, _triple_axioms("both"))
        if failure is None:
            failure = _run_sampled(_Swapped(o), draws, _triple_axioms("both")[1:], "swapped.", False)
        used_seed = seed
    else:
        raise ValueError(f"unknown mode {mode!r}")
    index = nilpotency_check(alg)
    passed = failure is None
    detail = {"nilpotency_index": index, "consistent": passed == (index <= 3)}
    if failure:
        return Verdict(False, failure[0], failure[1], mode, used_seed, detail)
    return Verdict(True, "bibrace", None, mode, used_seed, detail)


def gamma_homomorphism_check(
    alg: AlgebraSpec, mode: str = "exhaustive", seed: int = 0, samples: int = DEFAULT_SAMPLES
) -> Verdict:
    """gamma_{a+b} = gamma_{a o b} = gamma_a gamma_b by matrix multiplication."""
    F = alg.field
    if mode == "exhaustive":
        if alg.size > EXHAUSTIVE_LIMIT:
            raise TooLargeForExhaustive(f"|V| = {alg.size} exceeds {EXHAUSTIVE_LIMIT}")
        E = space_elements(F, alg.n)
        G = gamma_batch(alg, E)
        for a in range(len(E)):
            prod = F.matmul(G[a], G)
            g_sum = G[vector_index(F, F.add(E[a], E))]
            g_circ = G[vector_index(F, circle(E[a], E, alg))]
            ok = np.all((prod == g_sum) & (prod == g_circ), axis=(-2, -1))
            bad = np.flatnonzero(~ok)
            if bad.size:
                return Verdict(False, "gamma_homomorphism", [E[a].tolist(), E[bad[0]].tolist()], mode, None)
        return Verdict(True, "gamma_homomorphism", None, mode, None)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    A = F.random(rng, (samples, alg.n))
    B = F.random(rng, (samples, alg.n))
    prod = F.matmul(gamma_batch(alg, A), gamma_batch(alg, B))
    g_sum = gamma_batch(alg, F.add(A, B))
    g_circ = gamma_batch(alg, circle(A, B, alg))
    ok = np.all((prod == g_sum) & (prod == g_circ), axis=(-2, -1))
    bad = np.flatnonzero(~ok)
    if bad.size:
        return Verdict(False, "gamma_homomorphism", [A[bad[0]].tolist(), B[bad[0]].tolist()], mode, seed)
    return Verdict(True, "gamma_homomorphism", None, mode, seed)


def circle_exponent_check(
    alg: AlgebraSpec | StructureConstantAlgebra,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
) -> Verdict:
    """The p-fold o-power of every element is 0."""
    F = alg.field
    if mode == "exhaustive":
        if F.q**alg.n > EXHAUSTIVE_LIMIT:
            raise TooLargeForExhaustive(f"|V| = {F.q ** alg.n} exceeds {EXHAUSTIVE_LIMIT}")
        X = space_elements(F, alg.n)
        used_seed = None
    else:
        X = F.random(np.random.default_rng(seed), (samples, alg.n))
        used_seed = seed
    acc = X
    for _ in range(F.p - 1):
        acc = circle(acc, X, alg)
    bad = np.flatnonzero(np.any(acc != 0, axis=-1))
    if bad.size:
        return Verdict(False, "exponent_p", [X[bad[0]].tolist()], mode, used_seed)
    return Verdict(True, "exponent_p", None, mode, used_seed)
