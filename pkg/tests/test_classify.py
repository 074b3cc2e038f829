from __future__ import annotations

import numpy as np
import pytest

from fpbrace.algebra import AlgebraSpec, DefiningMatrix, quotient_by_complement, random_valid_theta
from fpbrace.classify import (
    ClassForm,
    canonical_representatives,
    class_of,
    compose_witnesses,
    count_classes,
    invert_witness,
    is_isomorphism,
    iso_test,
    validate_witness,
)
from fpbrace.errors import DimensionMismatch, EvenCharacteristic, InvalidDefiningMatrix, UnsupportedD
from fpbrace.gf import GF, find_nonsquare
from fpbrace.matfp import MatFp, random_invertible
from fpbrace.oracle import enumerate_valid_theta

F3 = GF(3)


def alg(F, rows):
    return AlgebraSpec.from_rows(F, rows)


def test_iso_test_examples():
    w = iso_test(alg(F3, [[1, 0], [0, 1]]), alg(F3, [[1, 0], [0, 1]]))
    assert w.A == MatFp.identity(F3, 2) and w.l == 1
    w = iso_test(alg(F3, [[1]]), alg(F3, [[2]]))
    assert w.A == MatFp.from_rows(F3, [[1]]) and w.l == 2
    assert iso_test(alg(F3, [[1, 0], [0, 1]]), alg(F3, [[1, 0], [0, 2]])) is None


def test_witness_direction():
    a1, a2 = alg(F3, [[1]]), alg(F3, [[2]])
    w = iso_test(a1, a2)
    assert is_isomorphism(w.forward(), a1, a2)
    assert is_isomorphism(w.matrix, a2, a1)


def test_iso_test_errors():
    with pytest.raises(DimensionMismatch):
        iso_test(alg(F3, [[1]]), alg(F3, [[1, 0], [0, 1]]))
    wide = AlgebraSpec(DefiningMatrix(F3, [[[1, 0]]]))
    with pytest.raises(UnsupportedD):
        iso_test(wide, wide)
    with pytest.raises(InvalidDefiningMatrix):
        iso_test(alg(F3, [[1, 1], [1, 1]]), alg(F3, [[1, 1], [1, 1]]))
    # explicit reduction makes it classifiable
    red = quotient_by_complement(wide)
    assert iso_test(red, alg(F3, [[1]])) is not None


def test_class_of_examples():
    assert class_of(alg(F3, [[1, 0], [0, 1]])).form is ClassForm.IDENTITY
    assert class_of(alg(F3, [[0, 1], [1, 0]])).form is ClassForm.NONSQUARE
    assert class_of(alg(F3, [[2]])).form is ClassForm.IDENTITY
    label = class_of(alg(GF(5), [[1, 0, 0], [0, 1, 0], [0, 0, 2]]))
    assert label.form is ClassForm.IDENTITY and (label.p, label.k, label.n) == (5, 1, 4)


def test_count_classes_examples():
    assert count_classes(3, 1, 3) == 2
    assert count_classes(3, 1, 2) == 1
    assert count_classes(5, 2, 5) == 2
    with pytest.raises(EvenCharacteristic):
        count_classes(2, 1, 3)


def test_canonical_representatives_examples():
    reps = canonical_representatives(3, 1, 2)
    assert [r.theta.scalar_matrix().tolist() for r in reps] == [[[1]]]
    reps = canonical_representatives(3, 1, 3)
    assert [r.theta.scalar_matrix().tolist() for r in reps] == [[[1, 0], [0, 1]], [[1, 0], [0, 2]]]
    reps = canonical_representatives(5, 1, 3)
    assert reps[1].theta.scalar_matrix().tolist() == [[1, 0], [0, 2]]
    reps = canonical_representatives(3, 2, 3)
    assert reps[1].theta.scalar_matrix()[1, 1] == find_nonsquare(GF(3, 2))
    with pytest.raises(EvenCharacteristic):
        canonical_representatives(2, 1, 3)


@pytest.mark.parametrize("p,k,n", [(3, 1, 3), (5, 1, 3), (3, 2, 3), (7, 1, 5), (3, 1, 2)])
def test_representatives_pairwise_distinct(p, k, n):
    reps = canonical_representatives(p, k, n)
    assert len(reps) == count_classes(p, k, n)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            assert (iso_test(a, b) is not None) == (i == j)


@pytest.mark.parametrize("p,k,m", [(3, 1, 2), (5, 1, 2), (3, 2, 1), (3, 1, 3)])
def test_every_theta_matches_one_representative(p, k, m):
    F = GF(p, k)
    reps = canonical_representatives(p, k, m + 1, field=F)
    thetas = enumerate_valid_theta(p, k, m, field=F)
    for t in thetas[:: max(1, len(thetas) // 150)]:
        a = AlgebraSpec(t)
        hits = [iso_test(a, r) is not None for r in reps]
        assert sum(hits) == 1
        assert hits.index(True) == (1 if class_of(a).form is ClassForm.NONSQUARE else 0)


def test_scaling_invariance():
    rng = np.random.default_rng(3)
    for F in (GF(5), GF(7), GF(3, 2)):
        for m in (1, 2, 3):
            t = random_valid_theta(F, m, rng)
            T = t.scalar_matrix()
            for c in range(1, F.q):
                c2 = F.mul(c, c)
                w = iso_test(AlgebraSpec(t), AlgebraSpec.from_matrix(T.scale(int(c2))))
                assert w is not None and w.l == 1


def test_equivalence_relation_small():
    thetas = [AlgebraSpec(t) for t in enumerate_valid_theta(3, 1, 2)]
    for a in thetas:
        assert iso_test(a, a) is not None
    for a in thetas[:6]:
        for b in thetas:
            w = iso_test(a, b)
            if w is None:
                assert iso_test(b, a) is None
                continue
            validate_witness(invert_witness(w), b, a)
            for c in thetas[::3]:
                w2 = iso_test(b, c)
                if w2 is not None:
                    validate_witness(compose_witnesses(w, w2), a, c)


def test_random_isomorphic_pairs():
    rng = np.random.default_rng(17)
    for F in (GF(3), GF(5), GF(3, 2), GF(7)):
        q = find_nonsquare(F)
        for _ in range(10):
            m = int(rng.integers(1, 5))
            a1 = AlgebraSpec(random_valid_theta(F, m, rng))
            A = random_invertible(F, m, rng)
            l = q if rng.integers(2) else F.one
            T2 = (A @ a1.theta.scalar_matrix() @ A.T).scale(l.inverse())
            w = iso_test(a1, AlgebraSpec.from_matrix(T2))
            assert w is not None
            assert w.A @ a1.theta.scalar_matrix() @ w.A.T == T2.scale(w.l)
