"""Affine maps x -> xL + t and the regular subgroup T_o = {tau_a} of AGL(V).

Maps act on row vectors from the right; ``compose(f, g)`` applies f first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraSpec, _as_vectors, gamma_batch, product, space_elements, vector_index
from .errors import DimensionMismatch, IdentityMismatch, SingularMatrix, TooLarge
from .gf import GF
from .matfp import MatFp, invert

__all__ = [
    "AffineMap",
    "PropertyResult",
    "SubgroupReport",
    "SubgroupTable",
    "TABLE_LIMIT",
    "build_T_circ",
    "commutator_sigma_tau",
    "compose",
    "conjugate_sigma_tau",
    "identity_map",
    "sigma",
    "tau",
    "translation_table",
    "verify_subgroup_properties",
]

TABLE_LIMIT = 5**4


class AffineMap:
    __slots__ = ("linear", "translation")

    def __init__(self, linear: MatFp, translation):
        t = np.asarray(translation, dtype=np.int64).reshape(-1)
        if linear.rows != linear.cols or t.size != linear.rows:
            raise DimensionMismatch("linear part must be n x n with a length-n translation")
        if ((t < 0) | (t >= linear.field.q)).any():
            raise ValueError("translation entries out of range")
        t.flags.writeable = False
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "translation", t)

    def __setattr__(self, name, value):
        raise AttributeError("AffineMap is immutable")

    @property
    def field(self) -> GF:
        return self.linear.field

    @property
    def n(self) -> int:
        return self.linear.rows

    def __call__(self, x) -> np.ndarray:
        F = self.field
        x = np.asarray(x, dtype=np.int64)
        if x.shape[-1] != self.n:
            raise DimensionMismatch(f"expected vectors of length {self.n}")
        return F.add(F.matmul(x, self.linear.data), self.translation)

    def inverse(self) -> AffineMap:
        """x -> (x - t) L^-1, by linear algebra."""
        F = self.field
        Linv = invert(self.linear)
        return AffineMap(Linv, F.neg(F.matmul(self.translation, Linv.data)))

    def power(self, e: int) -> AffineMap:
        result = identity_map(self.field, self.n)
        for _ in range(e):
            result = compose(result, self)
        return result

    def is_identity(self) -> bool:
        return self == identity_map(self.field, self.n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineMap):
            return NotImplemented
        return self.linear == other.linear and np.array_equal(self.translation, other.translation)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"AffineMap(linear={self.linear.tolist()}, translation={self.translation.tolist()})"


def identity_map(field: GF, n: int) -> AffineMap:
    return AffineMap(MatFp.identity(field, n), np.zeros(n, dtype=np.int64))


def compose(f: AffineMap, g: AffineMap) -> AffineMap:
    """x -> (x f) g."""
    if f.field != g.field or f.n != g.n:
        raise DimensionMismatch("maps act on different spaces")
    F = f.field
    return AffineMap(f.linear @ g.linear, F.add(F.matmul(f.translation, g.linear.data), g.translation))


def sigma(a, field: GF, n: int | None = None) -> AffineMap:
    """Translation x -> x + a."""
    a = np.asarray([field.encoding(v) for v in a], dtype=np.int64)
    if n is not None and a.size != n:
        raise DimensionMismatch(f"expected a vector of length {n}")
    return AffineMap(MatFp.identity(field, a.size), a)


def tau(a, alg: AlgebraSpec) -> AffineMap:
    """tau_a = gamma_a sigma_a: x -> x gamma_a + a."""
    a = _as_vectors(alg, a)
    return AffineMap(MatFp(alg.field, gamma_batch(alg, a)), a)


def _check_pair(a, b, alg: AlgebraSpec):
    return _as_vectors(alg, a), _as_vectors(alg, b)


def conjugate_sigma_tau(a, b, alg: AlgebraSpec) -> AffineMap:
    """sigma_a tau_b sigma_a^-1, checked against tau(a gamma_b + b + (p-1) a)."""
    F = alg.field
    a, b = _check_pair(a, b, alg)
    s = sigma(a, F)
    result = compose(compose(s, tau(b, alg)), s.inverse())
    label = F.add(F.add(F.matmul(a, gamma_batch(alg, b)), b), F.mul(F.p - 1, a))
    expected = tau(label, alg)
    if result != expected:
        raise IdentityMismatch(f"conjugate of tau_{b.tolist()} by sigma_{a.tolist()} is not tau_{label.tolist()}")
    return result


def commutator_sigma_tau(a, b, alg: AlgebraSpec) -> AffineMap:
    """sigma_a^-1 tau_b^-1 sigma_a tau_b, checked against sigma_{a.b}."""
    F = alg.field
    a, b = _check_pair(a, b, alg)
    s, t = sigma(a, F), tau(b, alg)
    result = compose(compose(compose(s.inverse(), t.inverse()), s), t)
    expected = sigma(product(a, b, alg), F)
    if result != expected:
        raise IdentityMismatch(f"[sigma_{a.tolist()}, tau_{b.tolist()}] is not sigma of the product")
    return result


# -- subgroup tables --------------------------------------------------------


@dataclass(frozen=True)
class SubgroupTable:
    """A family of p^(kn) affine maps, stored as batched arrays.

    Entry i is meant to be the map sending 0 to the i-th vector of V in
    lexicographic order; ``linear`` has shape (N, n, n), ``translation``
    (N, n).
    """

    field: GF
    n: int
    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        N = self.field.q**self.n
        if self.linear.shape != (N, self.n, self.n) or self.translation.shape != (N, self.n):
            raise DimensionMismatch(f"a table over F^{self.n} needs {N} maps")

    @property
    def size(self) -> int:
        return len(self.translation)

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> AffineMap:
        return AffineMap(MatFp(self.field, self.linear[i]), self.translation[i])

    def maps(self) -> list[AffineMap]:
        return [self[i] for i in range(self.size)]

    def label_of(self, vector) -> int:
        return int(vector_index(self.field, np.asarray(vector, dtype=np.int64)))

    def replace(self, i: int, f: AffineMap) -> SubgroupTable:
        linear = self.linear.copy()
        translation = self.translation.copy()
        linear[i] = f.linear.data
        translation[i] = f.translation
        return SubgroupTable(self.field, self.n, linear, translation)

    def key(self) -> bytes:
        """Canonical fingerprint of the set of maps (independent of order)."""
        flat = np.concatenate([self.linear.reshape(self.size, -1), self.translation], axis=1)
        order = np.lexsort(flat.T[::-1])
        return flat[order].tobytes()

    @classmethod
    def from_maps(cls, field: GF, n: int, maps) -> SubgroupTable:
        maps = list(maps)
        linear = np.stack([f.linear.data for f in maps]) if maps else np.zeros((0, n, n), dtype=np.int64)
        translation = np.stack([f.translation for f in maps]) if maps else np.zeros((0, n), dtype=np.int64)
        return cls(field, n, linear, translation)


def translation_table(field: GF, n: int) -> SubgroupTable:
    """T_+ = {sigma_a}."""
    E = space_elements(field, n)
    linear = np.broadcast_to(np.eye(n, dtype=np.int64), (len(E), n, n)).copy()
    return SubgroupTable(field, n, linear, E.copy())


def build_T_circ(alg: AlgebraSpec) -> SubgroupTable:
    """The labelled family {tau_a : a in V}."""
    if alg.size > TABLE_LIMIT:
        raise TooLarge(f"|V| = {alg.size} exceeds {TABLE_LIMIT}")
    E = space_elements(alg.field, alg.n)
    return SubgroupTable(alg.field, alg.n, gamma_batch(alg, E), E.copy())


# -- verification -----------------------------------------------------------


@dataclass(frozen=True)
class PropertyResult:
    passed: bool
    witness: list | None = None


@dataclass(frozen=True)
class SubgroupReport:
    closure: PropertyResult
    abelian: PropertyResult
    regular: PropertyResult
    exponent_p: PropertyResult
    normalized: PropertyResult

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results().values())

    def results(self) -> dict[str, PropertyResult]:
        return {
            "closure": self.closure,
            "abelian": self.abelian,
            "regular": self.regular,
            "exponent_p": self.exponent_p,
            "normalized": self.normalized,
        }


def _compose_batch(F: GF, L1, t1, L2, t2):
    return F.matmul(L1, L2), F.add(F.matmul(t1[..., None, :], L2)[..., 0, :], t2)


def _first_bad(ok: np.ndarray):
    bad = np.argwhere(~ok)
    return None if bad.size == 0 else bad[0].tolist()


def _lookup(t: SubgroupTable, L, tr):
    """Does each map (L, tr) occur in the table?  Maps are found by label."""
    idx = vector_index(t.field, tr)
    return np.all(t.linear[idx] == L, axis=(-2, -1)) & np.all(t.translation[idx] == tr, axis=-1)


def verify_subgroup_properties(t: SubgroupTable, alg: AlgebraSpec | None = None) -> SubgroupReport:
    """Check the five structural properties of a regular subgroup table.

    ``alg`` is accepted for symmetry with the construction but the checks
    only use the table itself.
    """
    F, N, n = t.field, t.size, t.n
    E = space_elements(F, n)
    L, tr = t.linear, t.translation
    idx = np.arange(N)

    # regular: map i sends 0 to vector i, hence labels are distinct
    ok = np.all(tr == E, axis=-1)
    bad = _first_bad(ok)
    regular = PropertyResult(bad is None, None if bad is None else [int(bad[0])])

    closure_w = abelian_w = None
    for i in range(N):
        Lc, tc = _compose_batch(F, L[i], tr[i], L, tr)
        if closure_w is None:
            b = _first_bad(_lookup(t, Lc, tc))
            if b is not None:
                closure_w = [i, int(b[0])]
        if abelian_w is None:
            Ld, td = _compose_batch(F, L, tr, L[i], tr[i])
            same = np.all(Lc == Ld, axis=(-2, -1)) & np.all(tc == td, axis=-1)
            b = _first_bad(same)
            if b is not None:
                abelian_w = [i, int(b[0])]
        if closure_w is not None and abelian_w is not None:
            break
    closure = PropertyResult(closure_w is None, closure_w)
    abelian = PropertyResult(abelian_w is None, abelian_w)

    # exponent p: the p-fold power is the identity, and the (p-1)-fold power
    # agrees with the inverse computed by linear algebra
    Lp, tp = L, tr
    for _ in range(F.p - 2):
        Lp, tp = _compose_batch(F, Lp, tp, L, tr)
    L_last, t_last = _compose_batch(F, Lp, tp, L, tr)
    eye = np.eye(n, dtype=np.int64)
    ok = np.all(L_last == eye, axis=(-2, -1)) & np.all(t_last == 0, axis=-1)
    exp_w = _first_bad(ok)
    if exp_w is None:
        for i in range(N):
            try:
                inv = t[i].inverse()
            except SingularMatrix:
                exp_w = [i]
                break
            if not (np.array_equal(inv.linear.data, Lp[i]) and np.array_equal(inv.translation, tp[i])):
                exp_w = [i]
                break
    exponent = PropertyResult(exp_w is None, None if exp_w is None else [int(exp_w[0])])

    # normalized by T_+: sigma_a (L, t) sigma_a^-1 = (L, aL + t - a) must be in the table
    norm_w = None
    for a in range(N):
        tn = F.sub(F.add(F.matmul(E[a], L), tr), E[a])
        b = _first_bad(_lookup(t, L, tn))
        if b is not None:
            norm_w = [a, int(idx[b[0]])]
            break
    normalized = PropertyResult(norm_w is None, norm_w)
    return SubgroupReport(closure, abelian, regular, exponent, normalized)
