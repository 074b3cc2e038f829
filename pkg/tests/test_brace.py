from __future__ import annotations

import numpy as np
import pytest

from fpbrace.algebra import (
    AlgebraSpec,
    DefiningMatrix,
    StructureConstantAlgebra,
    circle,
    gamma_batch,
    nilpotency_check,
    product_batch,
    space_elements,
)
from fpbrace.brace import (
    BraceCandidate,
    check_bibrace,
    check_left_brace,
    check_right_brace,
    circle_exponent_check,
    gamma_homomorphism_check,
)
from fpbrace.errors import TooLargeForExhaustive
from fpbrace.gf import GF
from fpbrace.matfp import invert, random_invertible

F3 = GF(3)
A1 = AlgebraSpec.from_rows(F3, [[1]])
TRUNC = StructureConstantAlgebra.truncated_polynomial(F3)


def transport(sca: StructureConstantAlgebra, P) -> StructureConstantAlgebra:
    """Same algebra written in the basis given by the rows of P."""
    F = sca.field
    n = sca.n
    Pinv = invert(P).data
    prods = product_batch(sca, P.data[:, None, :], P.data[None, :, :])
    return StructureConstantAlgebra(F, F.matmul(prods, Pinv).reshape(n, n, n))


def truncated(F: GF, n: int) -> StructureConstantAlgebra:
    """u F[u] / (u^(n+1)) in the basis u, u^2, ..., u^n."""
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i + j + 1 < n:
                c[i, j, i + j + 1] = 1
    return StructureConstantAlgebra(F, c)


def test_valid_theta_candidate_passes():
    cand = BraceCandidate.from_algebra(A1)
    for check in (check_left_brace, check_right_brace):
        v = check(cand)
        assert v.passed and v.witness is None and v.mode == "exhaustive" and v.seed is None


def test_trivial_brace_passes():
    cand = BraceCandidate.trivial(F3, 3)
    assert check_left_brace(cand).passed
    assert check_right_brace(cand).passed


def test_truncated_polynomial_left_brace():
    # u F[u]/(u^4) is a commutative associative radical ring, so (V, +, o) is a
    # two-sided brace; only the swapped structure (V, o, +) fails
    cand = BraceCandidate.from_algebra(TRUNC)
    assert check_left_brace(cand).passed
    assert check_right_brace(cand).passed
    v = check_bibrace(TRUNC)
    assert not v.passed
    assert v.axiom == "swapped.left_brace"
    assert v.detail == {"nilpotency_index": 4, "consistent": True}
    # the witness really violates a + (b o c) = (a + b) o a^- o (a + c)
    a, b, c = (np.array(w) for w in v.witness)
    a_inv = cand.inverse(a)
    lhs = F3.add(a, circle(b, c, TRUNC))
    rhs = circle(circle(F3.add(a, b), a_inv, TRUNC), F3.add(a, c), TRUNC)
    assert not np.array_equal(lhs, rhs)


def test_corrupted_table_fails():
    cand = BraceCandidate.from_algebra(A1)
    table = cand.table().copy()
    table[4, 5] = (table[4, 5] + 1) % 9
    bad = BraceCandidate.from_table(F3, 2, table)
    for check in (check_left_brace, check_right_brace):
        v = check(bad)
        assert not v.passed and v.witness


def test_corrupted_table_reports_first_axiom():
    # swapping two entries of row 1 breaks 1 o 0 = 1 first
    table = BraceCandidate.trivial(F3, 1).table().copy()
    table[1, 2], table[1, 0] = table[1, 0], table[1, 2]
    v = check_left_brace(BraceCandidate.from_table(F3, 1, table))
    assert not v.passed
    assert v.axiom == "identity" and v.witness == [[1]]


def test_bibrace_examples():
    assert check_bibrace(A1).passed
    assert check_bibrace(StructureConstantAlgebra.zero(F3, 3)).passed
    v = check_bibrace(AlgebraSpec.from_rows(F3, [[1, 0], [0, 2]]))
    assert v.passed and v.detail["nilpotency_index"] == 3


def test_too_large_for_exhaustive():
    with pytest.raises(TooLargeForExhaustive):
        check_left_brace(BraceCandidate.trivial(F3, 7))
    v = check_left_brace(BraceCandidate.trivial(F3, 7), mode="sampled", seed=3, samples=100)
    assert v.passed and v.seed == 3


def test_sampled_mode_replays():
    v1 = check_bibrace(TRUNC, mode="sampled", seed=11, samples=500)
    v2 = check_bibrace(TRUNC, mode="sampled", seed=11, samples=500)
    assert v1 == v2 and not v1.passed and v1.seed == 11


def test_gamma_homomorphism_examples():
    v = gamma_homomorphism_check(A1)
    assert v.passed and v.mode == "exhaustive"
    v = gamma_homomorphism_check(AlgebraSpec.from_rows(GF(5), [[1, 0], [0, 1]]), mode="sampled", seed=5)
    assert v.passed and v.seed == 5


def test_gamma_on_annihilator_is_trivial():
    E = space_elements(F3, 2)
    G = gamma_batch(A1, F3.add(np.array([0, 1]), E))
    assert np.array_equal(G, gamma_batch(A1, E))


def test_exponent_p():
    for alg in (A1, AlgebraSpec.from_rows(GF(5), [[1, 0], [0, 2]])):
        assert circle_exponent_check(alg).passed
    # the truncated algebra over F_3 has (1 + u)^3 = 1 + u^3, so u has larger order
    assert not circle_exponent_check(TRUNC).passed


def _commutative_associative_family():
    rng = np.random.default_rng(7)
    out = [StructureConstantAlgebra.zero(F3, n) for n in (2, 3, 4)]
    out += [truncated(F3, n) for n in (2, 3, 4)]
    out.append(AlgebraSpec.from_rows(F3, [[1, 0], [0, 1]]).structure_constants())
    out.append(AlgebraSpec(DefiningMatrix(F3, [[[1, 0]]])).structure_constants())
    out.append(AlgebraSpec(DefiningMatrix(F3, [[[1, 0], [0, 1]], [[0, 1], [1, 1]]])).structure_constants())
    # truncated cubic plus an annihilating coordinate
    c = np.zeros((4, 4, 4), dtype=np.int64)
    c[:3, :3, :3] = truncated(F3, 3).c
    out.append(StructureConstantAlgebra(F3, c))
    out += [transport(sca, random_invertible(F3, sca.n, rng)) for sca in list(out)]
    out.append(truncated(GF(5), 2))
    return out


@pytest.mark.parametrize("sca", _commutative_associative_family(), ids=lambda s: f"n{s.n}")
def test_bibrace_iff_cube_zero(sca):
    v = check_bibrace(sca)
    assert v.passed == (nilpotency_check(sca) <= 3)
    assert v.detail["consistent"]
