"""Isomorphism testing and classification of d = 1 algebras.

Two algebras with defining matrices T1, T2 are isomorphic exactly when
A T1 A^T = l T2 for an invertible A and a scalar l, which may be taken in
{1, q} (q the canonical nonsquare).  The search goes through canonical
forms of symmetric bilinear forms, so it is polynomial time.

Direction convention: for such (A, l) the block matrix diag(A, l) sends the
second algebra to the first, i.e. (x M) *1 (y M) = (x *2 y) M.  The map
from the first algebra to the second is therefore its inverse; see
``IsoWitness.forward``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraSpec, DefiningMatrix, product_batch
from .errors import DimensionMismatch, SpecMismatch, UnsupportedD, VerificationFailed
from .gf import GF, FieldElement, SquareClass, _check_characteristic, find_nonsquare
from .matfp import MatFp, canonical_form, discriminant, invert, rank

__all__ = [
    "ClassForm",
    "ClassLabel",
    "IsoWitness",
    "canonical_representatives",
    "class_of",
    "compose_witnesses",
    "count_classes",
    "invert_witness",
    "is_isomorphism",
    "iso_test",
    "validate_witness",
]


class ClassForm(enum.Enum):
    IDENTITY = "identity"
    NONSQUARE = "nonsquare"


@dataclass(frozen=True)
class ClassLabel:
    form: ClassForm
    p: int
    k: int
    n: int


@dataclass(frozen=True)
class IsoWitness:
    """A T1 A^T = l T2 with l in {1, q}."""

    A: MatFp
    l: FieldElement

    @property
    def matrix(self) -> MatFp:
        """diag(A, l): an isomorphism from the second algebra onto the first."""
        F = self.A.field
        m = self.A.rows
        data = np.zeros((m + 1, m + 1), dtype=np.int64)
        data[:m, :m] = self.A.data
        data[m, m] = self.l.value
        return MatFp(F, data)

    def forward(self) -> MatFp:
        """The isomorphism from the first algebra onto the second."""
        return invert(self.matrix)


def _scalar_theta(alg: AlgebraSpec) -> MatFp:
    if alg.d != 1:
        raise UnsupportedD(f"classification needs d = 1 (got d = {alg.d}); reduce with quotient_by_complement")
    alg.require_valid()
    return alg.theta.scalar_matrix()


def _same_space(alg1: AlgebraSpec, alg2: AlgebraSpec) -> None:
    if alg1.field != alg2.field:
        raise SpecMismatch("algebras are over different fields")
    if alg1.n != alg2.n:
        raise DimensionMismatch(f"dimensions differ: {alg1.n} vs {alg2.n}")


def is_isomorphism(M: MatFp, src: AlgebraSpec, dst: AlgebraSpec) -> bool:
    """Is x -> x M invertible and multiplicative on all basis pairs?"""
    F = src.field
    n = src.n
    if M.shape != (n, n) or rank(M) < n:
        return False
    E = np.eye(n, dtype=np.int64)
    lhs = product_batch(dst, M.data[:, None, :], M.data[None, :, :])
    rhs = F.matmul(product_batch(src, E[:, None, :], E[None, :, :]), M.data)
    return bool(np.array_equal(lhs, rhs))


def validate_witness(w: IsoWitness, alg1: AlgebraSpec, alg2: AlgebraSpec) -> None:
    """Raise VerificationFailed unless w is a correct witness for alg1 ~ alg2."""
    T1, T2 = _scalar_theta(alg1), _scalar_theta(alg2)
    q = find_nonsquare(alg1.field)
    if w.l.value not in (1, q.value):
        raise VerificationFailed(f"scalar {w.l!r} is not normalized to {{1, q}}")
    if w.A @ T1 @ w.A.T != T2.scale(w.l):
        raise VerificationFailed("A T1 A^T != l T2")
    if not is_isomorphism(w.forward(), alg1, alg2):
        raise VerificationFailed("witness is not multiplicative on basis pairs")


def iso_test(alg1: AlgebraSpec, alg2: AlgebraSpec) -> IsoWitness | None:
    """A validated witness that alg1 and alg2 are isomorphic, or None."""
    _same_space(alg1, alg2)
    T1, T2 = _scalar_theta(alg1), _scalar_theta(alg2)
    F = alg1.field
    label1, A1 = canonical_form(T1)
    # A1 T1 A1^T = C = A2 (l T2) A2^T  =>  (A2^-1 A1) T1 (A2^-1 A1)^T = l T2
    for l in (F.one, find_nonsquare(F)):
        label2, A2 = canonical_form(T2.scale(l))
        if label2 == label1:
            w = IsoWitness(invert(A2) @ A1, l)
            validate_witness(w, alg1, alg2)
            return w
    return None


def invert_witness(w: IsoWitness) -> IsoWitness:
    """Witness for alg2 ~ alg1 from one for alg1 ~ alg2."""
    Ainv = invert(w.A)
    if w.l.value == 1:
        return IsoWitness(Ainv, w.l)
    # A^-1 T2 A^-T = l^-1 T1; scaling A^-1 by q gives q^2 / q = q
    return IsoWitness(Ainv.scale(w.l), w.l)


def compose_witnesses(w12: IsoWitness, w23: IsoWitness) -> IsoWitness:
    """Witness for alg1 ~ alg3 from alg1 ~ alg2 and alg2 ~ alg3."""
    A = w23.A @ w12.A
    l = w12.l * w23.l
    F = A.field
    if l.value == 1 or l == find_nonsquare(F):
        return IsoWitness(A, l)
    # l = q^2: rescale A by q^-1
    q = find_nonsquare(F)
    return IsoWitness(A.scale(q.inverse()), F.one)


def class_of(alg: AlgebraSpec) -> ClassLabel:
    T = _scalar_theta(alg)
    F = alg.field
    form = ClassForm.IDENTITY
    if discriminant(T) is SquareClass.NONSQUARE and (alg.n - 1) % 2 == 0:
        form = ClassForm.NONSQUARE
    return ClassLabel(form, F.p, F.k, alg.n)


def _check_params(p: int, k: int, n: int) -> None:
    _check_characteristic(p)
    if k < 1:
        raise DimensionMismatch("extension degree must be at least 1")
    if n < 2:
        raise DimensionMismatch("n must be at least 2")


def count_classes(p: int, k: int, n: int) -> int:
    """Number of isomorphism classes for dim V = n, dim V.V = 1."""
    _check_params(p, k, n)
    return 2 if (n - 1) % 2 == 0 else 1


def canonical_representatives(p: int, k: int, n: int, field: GF | None = None) -> list[AlgebraSpec]:
    """Identity, plus diag(1, ..., 1, q) when n - 1 is even."""
    _check_params(p, k, n)
    F = field if field is not None else GF(p, k)
    m = n - 1
    reps = [AlgebraSpec(DefiningMatrix.from_matrix(MatFp.identity(F, m)))]
    if m % 2 == 0:
        entries = [F.one] * (m - 1) + [find_nonsquare(F)]
        reps.append(AlgebraSpec(DefiningMatrix.from_matrix(MatFp.diag(F, entries))))
    return reps
