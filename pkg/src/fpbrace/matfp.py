"""Dense matrices over F_{p^k} and congruence of symmetric bilinear forms.

Vectors are rows and matrices act on the right (x -> xM).  A congruence
transformation is written A B A^T: the rows of A are the new basis vectors
expressed in the old basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateForm, DimensionMismatch, NotSymmetric, SingularMatrix, SpecMismatch
from .gf import GF, FieldElement, SquareClass, find_nonsquare, is_square, sqrt

__all__ = [
    "CanonicalFormLabel",
    "MatFp",
    "canonical_form",
    "canonical_matrix",
    "congruent_diagonalize",
    "det",
    "discriminant",
    "invert",
    "left_kernel",
    "nullspace",
    "random_invertible",
    "random_symmetric",
    "rank",
    "rref",
    "span_basis",
]


class MatFp:
    """Immutable dense matrix over a `GF`, stored as encoded integers."""

    __slots__ = ("field", "data")

    def __init__(self, field: GF, data):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatch(f"expected a nonempty 2-D array, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError("matrix entries must be encodings in [0, q)")
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("MatFp is immutable")

    @classmethod
    def from_rows(cls, field: GF, rows) -> MatFp:
        """Build from nested rows of FieldElements, encodings or coefficient lists."""
        return cls(field, [[field.encoding(x) for x in row] for row in rows])

    @classmethod
    def identity(cls, field: GF, n: int) -> MatFp:
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: GF, rows: int, cols: int | None = None) -> MatFp:
        return cls(field, np.zeros((rows, rows if cols is None else cols), dtype=np.int64))

    @classmethod
    def diag(cls, field: GF, entries) -> MatFp:
        vals = [field.encoding(x) for x in entries]
        out = np.zeros((len(vals), len(vals)), dtype=np.int64)
        out[np.arange(len(vals)), np.arange(len(vals))] = vals
        return cls(field, out)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return FieldElement(self.field, int(self.data[i, j]))

    def _check(self, other: MatFp) -> None:
        if not isinstance(other, MatFp):
            raise TypeError("MatFp operand expected")
        if other.field != self.field:
            raise SpecMismatch("matrices over different fields")

    def __matmul__(self, other: MatFp) -> MatFp:
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return MatFp(self.field, self.field.matmul(self.data, other.data))

    def __add__(self, other: MatFp) -> MatFp:
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")
        return MatFp(self.field, self.field.add(self.data, other.data))

    def __sub__(self, other: MatFp) -> MatFp:
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")
        return MatFp(self.field, self.field.sub(self.data, other.data))

    def __neg__(self) -> MatFp:
        return MatFp(self.field, self.field.neg(self.data))

    def scale(self, c) -> MatFp:
        return MatFp(self.field, self.field.mul(self.data, self.field.encoding(c)))

    @property
    def T(self) -> MatFp:
        return MatFp(self.field, self.data.T)

    def transpose(self) -> MatFp:
        return self.T

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and bool(np.array_equal(self.data, self.data.T))

    def is_diagonal(self) -> bool:
        return bool(np.array_equal(self.data, np.diag(np.diag(self.data)))) if self.rows == self.cols else False

    def diagonal(self) -> list[FieldElement]:
        return [FieldElement(self.field, int(v)) for v in np.diag(self.data)]

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatFp):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.data, other.data)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"MatFp({self.field!r}, {self.data.tolist()})"


def transpose(A: MatFp) -> MatFp:
    return A.T


def rref(field: GF, arr) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an encoded array and its pivot columns."""
    R = np.array(arr, dtype=np.int64, copy=True)
    nrows, ncols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = field.mul(R[r], field.inv(R[r, c]))
        factors = R[:, c].copy()
        factors[r] = 0
        R = field.sub(R, field.mul(factors[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A: MatFp) -> int:
    return len(rref(A.field, A.data)[1])


def det(A: MatFp) -> FieldElement:
    """Determinant by elimination, tracking the sign of row swaps."""
    if A.rows != A.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    F = A.field
    R = np.array(A.data, copy=True)
    n = A.rows
    d = 1
    for c in range(n):
        nz = np.flatnonzero(R[c:, c])
        if nz.size == 0:
            return F.zero
        i = c + int(nz[0])
        if i != c:
            R[[c, i]] = R[[i, c]]
            d = int(F.neg(d))
        pivot = int(R[c, c])
        d = int(F.mul(d, pivot))
        factors = F.mul(R[c + 1 :, c], F.inv(pivot))
        R[c + 1 :] = F.sub(R[c + 1 :], F.mul(factors[:, None], R[c][None, :]))
    return FieldElement(F, d)


def invert(A: MatFp) -> MatFp:
    if A.rows != A.cols:
        raise DimensionMismatch("only square matrices are invertible")
    n = A.rows
    aug = np.concatenate([A.data, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = rref(A.field, aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return MatFp(A.field, R[:, n:])


def nullspace(field: GF, arr) -> np.ndarray:
    """Basis (as rows) of {x : arr @ x = 0}, from the reduced echelon form."""
    arr = np.asarray(arr, dtype=np.int64)
    ncols = arr.shape[1]
    R, pivots = rref(field, arr)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for b, f in enumerate(free):
        basis[b, f] = 1
        for row, pc in enumerate(pivots):
            basis[b, pc] = field.neg(R[row, f])
    return basis


def left_kernel(field: GF, arr) -> np.ndarray:
    """Basis (as rows) of {x : x @ arr = 0}."""
    return nullspace(field, np.asarray(arr, dtype=np.int64).T)


def span_basis(field: GF, vectors) -> np.ndarray:
    """Reduced echelon basis (rows) of the span of the given row vectors."""
    vectors = np.asarray(vectors, dtype=np.int64)
    if vectors.size == 0:
        return vectors.reshape(0, vectors.shape[-1] if vectors.ndim == 2 else 0)
    R, pivots = rref(field, vectors)
    return R[: len(pivots)]


# -- symmetric bilinear forms ----------------------------------------------


@dataclass(frozen=True)
class CanonicalFormLabel:
    """Complete congruence invariant of a nondegenerate symmetric form."""

    rank: int
    disc: SquareClass


def _require_symmetric(B: MatFp) -> None:
    if not B.is_symmetric():
        raise NotSymmetric("bilinear form matrix must be symmetric")


def congruent_diagonalize(B: MatFp) -> tuple[MatFp, MatFp]:
    """Return (A, D) with A invertible and A B A^T = D diagonal.

    Each step picks the first remaining index with a nonzero diagonal entry,
    or else the first nonzero off-diagonal pair (i, j), for which e_i + e_j is
    anisotropic because 2 is invertible.  That vector is moved into the
    current slot and the rest of the block is made orthogonal to it.  A zero
    block (the radical) is left at the end.
    """
    _require_symmetric(B)
    F = B.field
    n = B.rows
    M = np.array(B.data, copy=True)  # invariant: M = A B A^T
    A = np.eye(n, dtype=np.int64)

    def swap(i: int, j: int) -> None:
        A[[i, j]] = A[[j, i]]
        M[[i, j]] = M[[j, i]]
        M[:, [i, j]] = M[:, [j, i]]

    def add_multiple(r: int, t: int, c: int) -> None:
        # row_r(A) += c * row_t(A)
        A[r] = F.add(A[r], F.mul(c, A[t]))
        M[r] = F.add(M[r], F.mul(c, M[t]))
        M[:, r] = F.add(M[:, r], F.mul(c, M[:, t]))

    for t in range(n):
        diag = np.flatnonzero(np.diag(M)[t:])
        if diag.size:
            i = t + int(diag[0])
        else:
            block = M[t:, t:]
            off = np.argwhere(np.triu(block, 1) != 0)
            if off.size == 0:
                break
            i, j = (t + int(off[0][0]), t + int(off[0][1]))
            add_multiple(i, j, 1)
        if i != t:
            swap(i, t)
        pivot_inv = F.inv(M[t, t])
        for r in range(t + 1, n):
            if M[r, t]:
                add_multiple(r, t, int(F.neg(F.mul(M[r, t], pivot_inv))))

    Am = MatFp(F, A)
    D = Am @ B @ Am.T
    if not D.is_diagonal():
        raise AssertionError("diagonalization produced a non-diagonal matrix")
    return Am, D


def discriminant(B: MatFp) -> SquareClass:
    """Square class of det(B) for a nondegenerate symmetric B."""
    _require_symmetric(B)
    d = det(B)
    if d.value == 0:
        raise DegenerateForm("discriminant of a degenerate form")
    return is_square(d)


def canonical_matrix(field: GF, label: CanonicalFormLabel) -> MatFp:
    """I_r, or diag(1, ..., 1, q) with q the field's canonical nonsquare."""
    entries = [field.one] * label.rank
    if label.disc is SquareClass.NONSQUARE:
        entries[-1] = find_nonsquare(field)
    return MatFp.diag(field, entries)


def _sum_of_two_squares(target: FieldElement) -> tuple[FieldElement, FieldElement]:
    F = target.field
    for x in F.elements():
        r = target - x * x
        if r.value == 0:
            return x, F.zero
        if is_square(r) is SquareClass.SQUARE:
            return x, sqrt(r)
    raise AssertionError("every element of a finite field is a sum of two squares")


def canonical_form(B: MatFp) -> tuple[CanonicalFormLabel, MatFp]:
    """Label and A with A B A^T equal to the label's canonical matrix."""
    _require_symmetric(B)
    F = B.field
    m = B.rows
    if det(B).value == 0:
        raise DegenerateForm("canonical form requires a nondegenerate form")
    A0, D = congruent_diagonalize(B)
    q = find_nonsquare(F)
    rows = [A0.data[i].copy() for i in range(m)]
    nonsquare_slots = []
    for i, d in enumerate(D.diagonal()):
        if is_square(d) is SquareClass.SQUARE:
            s = sqrt(d)
        else:
            s = sqrt(d / q)
            nonsquare_slots.append(i)
        rows[i] = F.mul(rows[i], s.inverse().value)

    # q x^2 + q y^2 = 1 turns a pair of q-slots into a pair of 1-slots
    if len(nonsquare_slots) >= 2:
        x, y = _sum_of_two_squares(q.inverse())
        while len(nonsquare_slots) >= 2:
            i = nonsquare_slots.pop(0)
            j = nonsquare_slots.pop(0)
            ri, rj = rows[i], rows[j]
            rows[i] = F.add(F.mul(x.value, ri), F.mul(y.value, rj))
            rows[j] = F.add(F.mul((-y).value, ri), F.mul(x.value, rj))
    if nonsquare_slots and nonsquare_slots[0] != m - 1:
        i = nonsquare_slots[0]
        rows[i], rows[m - 1] = rows[m - 1], rows[i]

    disc = SquareClass.NONSQUARE if nonsquare_slots else SquareClass.SQUARE
    label = CanonicalFormLabel(rank=m, disc=disc)
    A = MatFp(F, np.array(rows))
    if A @ B @ A.T != canonical_matrix(F, label):
        raise AssertionError("canonical form normalization failed")
    return label, A


# -- random generation (tests, sampling) -----------------------------------


def random_symmetric(field: GF, m: int, rng: np.random.Generator) -> MatFp:
    upper = np.triu(field.random(rng, (m, m)))
    return MatFp(field, upper + np.triu(upper, 1).T)


def random_invertible(field: GF, m: int, rng: np.random.Generator) -> MatFp:
    while True:
        A = MatFp(field, field.random(rng, (m, m)))
        if det(A).value:
            return A

