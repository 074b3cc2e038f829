"""Brute-force engines used to cross-check the closed-form results.

Nothing here relies on the classification theorem: isomorphisms are found by
exhaustive search, defining matrices by enumeration, and regular subgroups of
AGL(n, p) by closing generator sets.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraSpec,
    AnyAlgebra,
    DefiningMatrix,
    StructureConstantAlgebra,
    annihilator,
    nilpotency_check,
    product_batch,
    space_elements,
    vector_index,
)
from .classify import IsoWitness, iso_test
from .errors import NotIsomorphic, SearchSpaceTooLarge, SpecMismatch, VerificationFailed
from .gf import GF, find_nonsquare
from .holomorph import SubgroupTable, build_T_circ
from .matfp import MatFp, invert, rank

__all__ = [
    "SubgroupMatch",
    "brute_force_iso",
    "dixon_conjugator",
    "enumerate_regular_subgroups_small",
    "enumerate_valid_theta",
    "gl_order",
    "match_subgroup",
    "partition_into_classes",
    "structure_constants_of_table",
]

BLOCKDIAG_LIMIT = 10**7
UNRESTRICTED_LIMIT = 2 * 10**6
ENUMERATION_LIMIT = 10**6
SUBGROUP_LIMIT = 27
_CHUNK = 1 << 16


def gl_order(q: int, n: int) -> int:
    return math.prod(q**n - q**i for i in range(n))


def _index_vectors(q: int, idx: np.ndarray, length: int) -> np.ndarray:
    """Vectors at the given lexicographic positions (last coordinate fastest)."""
    return (idx[:, None] // q ** np.arange(length - 1, -1, -1, dtype=np.int64)) % q


def _batch_det(F: GF, M: np.ndarray) -> np.ndarray:
    """Determinants of a stack of m x m matrices by the Leibniz formula."""
    m = M.shape[-1]
    total = np.zeros(M.shape[:-2], dtype=np.int64)
    for perm in itertools.permutations(range(m)):
        term = np.ones(M.shape[:-2], dtype=np.int64)
        for i, j in enumerate(perm):
            term = F.mul(term, M[..., i, j])
        inversions = sum(perm[i] > perm[j] for i in range(m) for j in range(i + 1, m))
        total = F.sub(total, term) if inversions % 2 else F.add(total, term)
    return total


def _sca(alg: AnyAlgebra) -> StructureConstantAlgebra:
    return alg.structure_constants() if isinstance(alg, AlgebraSpec) else alg


# -- isomorphism search -----------------------------------------------------


def _blockdiag_search(alg1: AlgebraSpec, alg2: AlgebraSpec) -> IsoWitness | None:
    F = alg1.field
    m, q = alg1.m, F.q
    total = q ** (m * m)
    if 2 * gl_order(q, m) > BLOCKDIAG_LIMIT:
        raise SearchSpaceTooLarge(f"|GL({m}, {q})| x 2 exceeds {BLOCKDIAG_LIMIT}")
    T1 = alg1.theta.scalar_matrix().data
    T2 = alg2.theta.scalar_matrix().data
    for l in (F.one, find_nonsquare(F)):
        target = F.mul(l.value, T2)
        for start in range(0, total, _CHUNK):
            idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
            A = _index_vectors(q, idx, m * m).reshape(-1, m, m)
            lhs = F.matmul(F.matmul(A, T1), A.transpose(0, 2, 1))
            ok = np.all(lhs == target, axis=(-2, -1)) & (_batch_det(F, A) != 0)
            hits = np.flatnonzero(ok)
            if hits.size:
                return IsoWitness(MatFp(F, A[hits[0]]), l)
    return None


def _unrestricted_search(alg1: AnyAlgebra, alg2: AnyAlgebra) -> MatFp | None:
    """Row-by-row backtracking for an invertible M with (e_i M)(e_j M) = (e_i e_j) M.

    Rows are placed in an order that puts annihilator basis vectors first;
    each product constraint is checked as soon as every row it mentions is
    placed.  Partial assignments are kept as one batch, in scan order.
    """
    F = alg1.field
    n, q = alg1.n, F.q
    if gl_order(q, n) > UNRESTRICTED_LIMIT:
        raise SearchSpaceTooLarge(f"|GL({n}, {q})| exceeds {UNRESTRICTED_LIMIT}")
    c1 = _sca(alg1).c
    zero_rows = [i for i in range(n) if not c1[i].any() and not c1[:, i].any()]
    order = zero_rows + [i for i in range(n) if i not in zero_rows]
    pos = {row: t for t, row in enumerate(order)}

    # constraint (i, j) becomes checkable once i, j and every k in the support
    # of e_i e_j are placed
    checks: dict[int, list[tuple[int, int]]] = {t: [] for t in range(n)}
    for i in range(n):
        for j in range(i, n):
            support = np.flatnonzero(c1[i, j]).tolist() + np.flatnonzero(c1[j, i]).tolist()
            level = max([pos[i], pos[j]] + [pos[k] for k in support])
            checks[level].append((i, j))

    all_vectors = space_elements(F, n)[1:]
    # an isomorphism maps Ann(alg1) onto Ann(alg2): rows for annihilating
    # basis vectors must themselves annihilate alg2
    E = np.eye(n, dtype=np.int64)
    annihilating = np.all(product_batch(alg2, all_vectors[:, None, :], E[None, :, :]) == 0, axis=(-2, -1))
    annihilating &= np.all(product_batch(alg2, E[None, :, :], all_vectors[:, None, :]) == 0, axis=(-2, -1))
    partial = np.zeros((1, n, n), dtype=np.int64)
    for t, row in enumerate(order):
        cand = all_vectors[annihilating] if row in zero_rows else all_vectors
        K, C = len(partial), len(cand)
        if K == 0:
            return None
        ext = np.repeat(partial, C, axis=0)
        ext[:, row, :] = np.tile(cand, (K, 1))
        ok = np.ones(len(ext), dtype=bool)
        for i, j in checks[t]:
            for a, b in ((i, j), (j, i)):
                lhs = product_batch(alg2, ext[:, a, :], ext[:, b, :])
                rhs = F.matmul(c1[a, b][None, None, :], ext)[:, 0, :]
                ok &= np.all(lhs == rhs, axis=-1)
        partial = ext[ok]
    if len(partial) == 0:
        return None
    for start in range(0, len(partial), _CHUNK):
        block = partial[start : start + _CHUNK]
        hits = np.flatnonzero(_batch_det(F, block) != 0)
        if hits.size:
            return MatFp(F, block[hits[0]])
    return None


def brute_force_iso(alg1: AnyAlgebra, alg2: AnyAlgebra, shape: str = "unrestricted"):
    """Exhaustive isomorphism search.

    ``shape="blockdiag"`` scans diag(A, l) with A in GL(m) and l in {1, q}
    and returns an IsoWitness (same convention as ``iso_test``).
    ``shape="unrestricted"`` scans all of GL(n) and returns the matrix M of
    an isomorphism x -> x M from alg1 onto alg2.  Both return None when no
    isomorphism exists.
    """
    if alg1.field != alg2.field:
        raise SpecMismatch("algebras are over different fields")
    if alg1.n != alg2.n:
        return None
    if shape == "blockdiag":
        if not (isinstance(alg1, AlgebraSpec) and isinstance(alg2, AlgebraSpec)) or alg1.d != 1 or alg2.d != 1:
            raise ValueError("blockdiag search needs d = 1 algebra specs")
        return _blockdiag_search(alg1, alg2)
    if shape == "unrestricted":
        return _unrestricted_search(alg1, alg2)
    raise ValueError(f"unknown shape {shape!r}")


# -- enumeration and partition ----------------------------------------------


def enumerate_valid_theta(p: int, k: int, m: int, d: int = 1, field: GF | None = None) -> list[DefiningMatrix]:
    """All valid defining matrices, in lexicographic order of the upper triangle.

    For d = 1 these are the invertible symmetric m x m matrices.
    """
    F = field if field is not None else GF(p, k)
    q = F.q
    iu = np.triu_indices(m)
    cells = len(iu[0]) * d
    total = q**cells
    if total > ENUMERATION_LIMIT:
        raise SearchSpaceTooLarge(f"{total} candidate matrices exceed {ENUMERATION_LIMIT}")
    vals = _index_vectors(q, np.arange(total, dtype=np.int64), cells).reshape(total, -1, d)
    mats = np.zeros((total, m, m, d), dtype=np.int64)
    mats[:, iu[0], iu[1]] = vals
    mats[:, iu[1], iu[0]] = vals
    if d == 1:
        keep = np.flatnonzero(_batch_det(F, mats[..., 0]) != 0)
    else:
        # valid iff the m blocks (rows of the m x (m d) matrix) are independent
        from .algebra import validate_defining_matrix

        keep = [i for i in range(total) if validate_defining_matrix(DefiningMatrix(F, mats[i])).valid]
    return [DefiningMatrix(F, mats[i]) for i in keep]


def _field_key(F: GF):
    return (F.p, F.k, F.modulus)


def _related(args) -> list[bool]:
    """Worker: is each candidate isomorphic to the representative?"""
    fkey, via, shape, rep, others = args
    F = GF(fkey[0], fkey[1], fkey[2])
    a = AlgebraSpec(DefiningMatrix(F, rep))
    out = []
    for entries in others:
        b = AlgebraSpec(DefiningMatrix(F, entries))
        if via == "iso_test":
            out.append(iso_test(a, b) is not None)
        else:
            out.append(brute_force_iso(a, b, shape) is not None)
    return out


def partition_into_classes(
    thetas: Sequence[DefiningMatrix | AlgebraSpec],
    via: str = "iso_test",
    workers: int = 1,
    shape: str = "unrestricted",
) -> list[list[int]]:
    """Partition indices of ``thetas`` into isomorphism classes.

    The first unassigned matrix becomes a representative and every other
    unassigned matrix is tested against it; those tests run in parallel when
    ``workers > 1``.  Classes come out ordered by their first member.
    """
    if via not in ("iso_test", "brute_force"):
        raise ValueError(f"unknown relation {via!r}")
    thetas = [t.theta if isinstance(t, AlgebraSpec) else t for t in thetas]
    if not thetas:
        return []
    fkey = _field_key(thetas[0].field)
    raw = [np.asarray(t.entries) for t in thetas]
    unassigned = list(range(len(thetas)))
    classes = []
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        while unassigned:
            rep, rest = unassigned[0], unassigned[1:]
            if pool is not None and rest:
                chunks = [rest[i::workers] for i in range(workers)]
                jobs = [(fkey, via, shape, raw[rep], [raw[j] for j in c]) for c in chunks]
                flags = dict()
                for c, res in zip(chunks, pool.map(_related, jobs)):
                    flags.update(zip(c, res))
                related = [flags[j] for j in rest]
            else:
                related = _related((fkey, via, shape, raw[rep], [raw[j] for j in rest]))
            members = [rep] + [j for j, r in zip(rest, related) if r]
            classes.append(members)
            unassigned = [j for j, r in zip(rest, related) if not r]
    finally:
        if pool is not None:
            pool.shutdown()
    return classes


# -- regular subgroups of AGL(n, p) -----------------------------------------


def _compose(F: GF, L1, t1, L2, t2):
    L = F.matmul(L1, L2)
    t = F.add(F.matmul(t1[..., None, :], L2)[..., 0, :], t2)
    return L, t


def _unipotent_candidates(F: GF, n: int) -> np.ndarray:
    """All n x n matrices L with L^p = I."""
    total = F.q ** (n * n)
    L = _index_vectors(F.q, np.arange(total, dtype=np.int64), n * n).reshape(total, n, n)
    P = L
    for _ in range(F.p - 1):
        P = F.matmul(P, L)
    return L[np.all(P == np.eye(n, dtype=np.int64), axis=(-2, -1))]


class _Group:
    """Partial regular subgroup: at most one linear part per label."""

    def __init__(self, F: GF, E: np.ndarray, present: np.ndarray, linear: np.ndarray):
        self.F, self.E = F, E
        self.present = present
        self.linear = linear

    def key(self) -> bytes:
        return self.present.tobytes() + self.linear[self.present].tobytes()

    def elements(self):
        idx = np.flatnonzero(self.present)
        return idx, self.linear[idx], self.E[idx]

    def close(self, L: np.ndarray, a: int) -> _Group | None:
        """Close under composition and T_+ conjugation after adding (L, E[a]).

        Returns None as soon as two maps with the same label appear.
        """
        F, E = self.F, self.E
        present = self.present.copy()
        linear = self.linear.copy()
        queue_L, queue_t = [L], [E[a]]
        while queue_L:
            Ln = np.stack(queue_L)
            tn = np.stack(queue_t)
            # conjugates sigma_b (L, t) sigma_b^-1 = (L, bL + t - b)
            tc = F.sub(F.add(F.matmul(E[:, None, None, :], Ln[None])[:, :, 0, :], tn[None]), E[:, None, :])
            Lc = np.broadcast_to(Ln[None], tc.shape[:2] + Ln.shape[1:])
            new_L = Lc.reshape(-1, *Ln.shape[1:])
            new_t = tc.reshape(-1, tn.shape[-1])
            queue_L, queue_t = [], []
            pending = {}
            for Lx, tx in zip(new_L, new_t):
                i = int(vector_index(F, tx))
                if present[i]:
                    if not np.array_equal(linear[i], Lx):
                        return None
                    continue
                if i in pending:
                    if not np.array_equal(pending[i], Lx):
                        return None
                    continue
                pending[i] = Lx
            # products of the new maps with everything already present
            for i, Lx in pending.items():
                present[i] = True
                linear[i] = Lx
            idx = np.flatnonzero(present)
            if pending:
                pi = np.array(sorted(pending))
                Lp, tp = _compose(F, linear[pi][:, None], E[pi][:, None], linear[idx][None], E[idx][None])
                Lq, tq = _compose(F, linear[idx][None], E[idx][None], linear[pi][:, None], E[pi][:, None])
                if not (np.array_equal(Lp, Lq) and np.array_equal(tp, tq)):
                    return None  # not abelian
                for Lx, tx in zip(Lp.reshape(-1, *L.shape), tp.reshape(-1, L.shape[0])):
                    j = int(vector_index(F, tx))
                    if present[j]:
                        if not np.array_equal(linear[j], Lx):
                            return None
                    else:
                        queue_L.append(Lx)
                        queue_t.append(tx)
        return _Group(F, E, present, linear)


def enumerate_regular_subgroups_small(p: int, n: int) -> list[SubgroupTable]:
    """All elementary abelian regular subgroups of AGL(n, p) normalized by T_+.

    Depth-first search: extend a partial group by a map (L, a) for the first
    label a not yet covered, with L^p = I and (L, a) commuting with the
    partial group, then close under composition and T_+ conjugation.
    Groups are deduplicated at every level.  Output is in canonical order
    (sorted by the linear parts in label order).
    """
    if p**n > SUBGROUP_LIMIT:
        raise SearchSpaceTooLarge(f"p^n = {p ** n} exceeds {SUBGROUP_LIMIT}")
    F = GF(p)
    E = space_elements(F, n)
    N = len(E)
    eye = np.eye(n, dtype=np.int64)
    cands = _unipotent_candidates(F, n)
    start_present = np.zeros(N, dtype=bool)
    start_present[0] = True
    start_linear = np.zeros((N, n, n), dtype=np.int64)
    start_linear[0] = eye
    seen: set[bytes] = set()
    found: dict[bytes, np.ndarray] = {}
    stack = [_Group(F, E, start_present, start_linear)]
    while stack:
        g = stack.pop()
        k = g.key()
        if k in seen:
            continue
        seen.add(k)
        if g.present.all():
            found[g.linear.tobytes()] = g.linear
            continue
        a = int(np.flatnonzero(~g.present)[0])
        _, Lg, tg = g.elements()
        # commute with every present map: L M = M L and a M + t = t L + a
        t_a = E[a]
        LM = F.matmul(cands[:, None], Lg[None])
        ML = F.matmul(Lg[None], cands[:, None])
        lhs = F.add(F.matmul(t_a, Lg), tg)[None]
        rhs = F.add(F.matmul(tg[None, :, None, :], cands[:, None])[:, :, 0, :], t_a)
        ok = np.all(LM == ML, axis=(-2, -1)).all(axis=1) & np.all(lhs == rhs, axis=-1).all(axis=1)
        # exponent p: the p-fold power of (L, a) is trivial
        Lp, tp = cands, np.broadcast_to(t_a, (len(cands), n))
        for _ in range(p - 1):
            Lp, tp = _compose(F, Lp, tp, cands, np.broadcast_to(t_a, (len(cands), n)))
        ok &= np.all(tp == 0, axis=-1)
        for L in cands[ok][::-1]:
            h = g.close(L, a)
            if h is not None:
                stack.append(h)
    tables = [
        SubgroupTable(F, n, lin.copy(), E.copy()) for _, lin in sorted(found.items(), key=lambda kv: kv[0])
    ]
    return tables


# -- matching subgroups with defining matrices ------------------------------


def structure_constants_of_table(t: SubgroupTable) -> StructureConstantAlgebra:
    """Product a . b = a (gamma_b - I), read off the maps labelled by e_j."""
    F, n = t.field, t.n
    c = np.zeros((n, n, n), dtype=np.int64)
    for j in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[j] = 1
        L = t.linear[t.label_of(e)]
        c[:, j, :] = F.sub(L, np.eye(n, dtype=np.int64))
    return StructureConstantAlgebra(F, c)


@dataclass(frozen=True)
class SubgroupMatch:
    """How a regular subgroup arises from a defining matrix.

    kind is "translation" (the trivial brace), "theta" (conjugate of
    build_T_circ(theta) by the basis change ``basis``) or "unmatched".
    ``basis`` rows are the new basis vectors in old coordinates.
    """

    kind: str
    theta: DefiningMatrix | None = None
    basis: MatFp | None = None


def _conjugate_table(t: SubgroupTable, P: np.ndarray) -> SubgroupTable:
    """Express a table given in new coordinates (x_old = x_new P) in old ones."""
    F = t.field
    Pinv = invert(MatFp(F, P)).data
    L = F.matmul(F.matmul(Pinv, t.linear), P)
    tr = F.matmul(t.translation, P)
    order = np.argsort(vector_index(F, tr))
    return SubgroupTable(F, t.n, L[order], tr[order])


def match_subgroup(t: SubgroupTable) -> SubgroupMatch:
    F, n = t.field, t.n
    eye = np.eye(n, dtype=np.int64)
    if np.all(t.linear == eye):
        return SubgroupMatch("translation")
    sca = structure_constants_of_table(t)
    if not sca.is_commutative() or nilpotency_check(sca) > 3:
        return SubgroupMatch("unmatched")
    ann = annihilator(sca)
    d = len(ann)
    m = n - d
    # complement: standard basis vectors outside the annihilator's pivot columns
    pivots = [int(np.flatnonzero(r)[0]) for r in ann]
    comp = np.array([eye[i] for i in range(n) if i not in pivots], dtype=np.int64).reshape(m, n)
    P = np.concatenate([comp, ann]).astype(np.int64)
    if rank(MatFp(F, P)) < n or m == 0:
        return SubgroupMatch("unmatched")
    prods = product_batch(sca, P[:m, None, :], P[None, :m, :])
    # coordinates of products in the annihilator basis
    coords = F.matmul(prods, invert(MatFp(F, P)).data)
    if np.any(coords[..., :m]):
        return SubgroupMatch("unmatched")
    theta = DefiningMatrix(F, coords[..., m:])
    alg = AlgebraSpec(theta)
    if not alg.is_valid():
        return SubgroupMatch("unmatched")
    rebuilt = _conjugate_table(build_T_circ(alg), P)
    if not (np.array_equal(rebuilt.linear, t.linear) and np.array_equal(rebuilt.translation, t.translation)):
        return SubgroupMatch("unmatched")
    return SubgroupMatch("theta", theta, MatFp(F, P))


# -- Dixon conjugator ---------------------------------------------------------


def _circ_table(t: SubgroupTable) -> np.ndarray:
    """Label of phi_a phi_b, i.e. the image of a under phi_b."""
    F = t.field
    E = space_elements(F, t.n)
    imgs = F.add(F.matmul(E[:, None, None, :], t.linear[None])[:, :, 0, :], t.translation[None])
    return vector_index(F, imgs)


def _is_elementary_abelian(t: SubgroupTable, circ: np.ndarray) -> bool:
    N = len(circ)
    if not np.array_equal(vector_index(t.field, t.translation), np.arange(N)):
        return False
    if not np.array_equal(circ, circ.T) or not ((circ >= 0) & (circ < N)).all():
        return False
    acc = np.arange(N)
    for _ in range(t.field.p - 1):
        acc = circ[acc, np.arange(N)]
    return bool(np.all(acc == 0))


def _basis_coordinates(circ: np.ndarray, p: int) -> tuple[list[int], np.ndarray]:
    """Greedy F_p basis of the group (labels) and coordinates of every label."""
    N = len(circ)
    span = {0: ()}
    basis: list[int] = []
    for g in range(N):
        if g in span:
            continue
        basis.append(g)
        new = {}
        for h, coords in span.items():
            x = h
            for c in range(p):
                new[x] = coords + (c,)
                x = circ[x, g]
        span = new
    coords = np.zeros((N, len(basis)), dtype=np.int64)
    for h, cs in span.items():
        coords[h] = cs
    return basis, coords


def dixon_conjugator(t1: SubgroupTable, t2: SubgroupTable) -> np.ndarray:
    """Permutation g of V (as label array, x -> g[x]) with g^-1 t1 g = t2.

    g is built from a group isomorphism alpha: t1 -> t2 through
    g(0 phi) = 0 alpha(phi), then verified map by map.
    """
    if t1.field != t2.field or t1.size != t2.size:
        raise NotIsomorphic("groups have different orders")
    c1, c2 = _circ_table(t1), _circ_table(t2)
    p = t1.field.p
    ok1, ok2 = _is_elementary_abelian(t1, c1), _is_elementary_abelian(t2, c2)
    if ok1 != ok2:
        raise NotIsomorphic("exactly one group is regular elementary abelian")
    if not ok1:
        raise NotIsomorphic("only regular elementary abelian groups are supported")
    b1, x1 = _basis_coordinates(c1, p)
    b2, x2 = _basis_coordinates(c2, p)
    if len(b1) != len(b2):
        raise NotIsomorphic("ranks differ")
    # alpha sends the element with coordinates x in t1 to the one with the same coordinates in t2
    N = t1.size
    weights = p ** np.arange(len(b2) - 1, -1, -1, dtype=np.int64)
    label2_of_coords = np.empty(N, dtype=np.int64)
    label2_of_coords[x2 @ weights] = np.arange(N)
    g = label2_of_coords[x1 @ weights]
    # verify: for each phi in t1, g^-1 phi g = alpha(phi), as permutations of labels
    ginv = np.empty(N, dtype=np.int64)
    ginv[g] = np.arange(N)
    for a in range(N):
        phi = c1[:, a]  # x -> x phi_a
        conj = g[phi[ginv]]
        if not np.array_equal(conj, c2[:, g[a]]):
            raise VerificationFailed(f"conjugation fails at label {a}")
    return g
