from __future__ import annotations

import numpy as np
import pytest

from fpbrace.errors import DegenerateForm, DimensionMismatch, NotSymmetric, SingularMatrix
from fpbrace.gf import GF, SquareClass, find_nonsquare
from fpbrace.matfp import (
    CanonicalFormLabel,
    MatFp,
    canonical_form,
    canonical_matrix,
    congruent_diagonalize,
    det,
    discriminant,
    invert,
    nullspace,
    random_invertible,
    random_symmetric,
    rank,
)

F3, F5 = GF(3), GF(5)
FIELDS = [GF(3), GF(5), GF(7), GF(3, 2), GF(5, 2)]


def M(F, rows):
    return MatFp.from_rows(F, rows)


def test_det_examples():
    assert det(MatFp.identity(F5, 3)) == 1
    assert det(M(F3, [[0, 1], [1, 0]])) == 2


def test_invert_example():
    assert invert(M(F3, [[1, 1], [0, 1]])) == M(F3, [[1, 2], [0, 1]])
    with pytest.raises(SingularMatrix):
        invert(M(F3, [[1, 1], [1, 1]]))


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        M(F3, [[1, 0]]) @ M(F3, [[1, 0]])


def test_rank_and_nullspace():
    A = M(F3, [[1, 2, 0], [2, 1, 0]])
    assert rank(A) == 1
    ns = nullspace(F3, A.data)
    assert ns.shape == (2, 3)
    assert not F3.matmul(A.data, ns.T).any()


def test_congruent_diagonalize_examples():
    A, D = congruent_diagonalize(MatFp.identity(F3, 2))
    assert A == MatFp.identity(F3, 2) and D == MatFp.identity(F3, 2)
    A, D = congruent_diagonalize(M(F3, [[0, 1], [1, 0]]))
    assert A == M(F3, [[1, 1], [1, 2]])
    assert D == MatFp.diag(F3, [2, 1])
    B = MatFp.diag(F5, [1, 2])
    A, D = congruent_diagonalize(B)
    assert A == MatFp.identity(F5, 2) and D == B
    with pytest.raises(NotSymmetric):
        congruent_diagonalize(M(F3, [[0, 1], [0, 0]]))


def test_congruent_diagonalize_degenerate():
    B = M(F5, [[1, 1, 2], [1, 1, 2], [2, 2, 0]])  # rank 2
    A, D = congruent_diagonalize(B)
    assert A @ B @ A.T == D and D.is_diagonal()
    assert sum(1 for x in D.diagonal() if x.value) == rank(B) == 2


def test_discriminant_examples():
    assert discriminant(MatFp.identity(F5, 3)) is SquareClass.SQUARE
    assert discriminant(MatFp.diag(F3, [1, 2])) is SquareClass.NONSQUARE
    assert discriminant(M(F3, [[0, 1], [1, 0]])) is SquareClass.NONSQUARE
    with pytest.raises(DegenerateForm):
        discriminant(M(F3, [[1, 1], [1, 1]]))


def test_canonical_form_examples():
    label, A = canonical_form(MatFp.identity(F3, 2))
    assert label == CanonicalFormLabel(2, SquareClass.SQUARE) and A == MatFp.identity(F3, 2)
    B = MatFp.diag(F3, [2, 2])
    label, A = canonical_form(B)
    assert label.disc is SquareClass.SQUARE and A @ B @ A.T == MatFp.identity(F3, 2)
    B = M(F3, [[0, 1], [1, 0]])
    label, A = canonical_form(B)
    assert label.disc is SquareClass.NONSQUARE and A @ B @ A.T == MatFp.diag(F3, [1, 2])
    with pytest.raises(DegenerateForm):
        canonical_form(M(F3, [[1, 1], [1, 1]]))


def test_canonical_matrix_uses_nonsquare():
    F9 = GF(3, 2)
    C = canonical_matrix(F9, CanonicalFormLabel(2, SquareClass.NONSQUARE))
    assert C[1, 1] == find_nonsquare(F9)


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_forms_random(F):
    rng = np.random.default_rng(F.q)
    for m in (1, 2, 3, 4):
        for _ in range(15):
            B = random_symmetric(F, m, rng)
            A, D = congruent_diagonalize(B)
            assert A @ B @ A.T == D and D.is_diagonal() and rank(A) == m
            P = random_invertible(F, m, rng)
            assert rank(P @ B @ P.T) == rank(B)
            if rank(B) == m:
                label, C = canonical_form(B)
                assert C @ B @ C.T == canonical_matrix(F, label)
                assert discriminant(P @ B @ P.T) is discriminant(B) is label.disc
