"""Commutative radical F_{p^k}-algebras nilpotent of index 3.

An `AlgebraSpec` is determined by its defining matrix: an m x m grid whose
cell (i, j) holds the annihilator coordinates of e_i . e_j.  The basis is
e_1..e_n with Ann(V) = span(e_{m+1}, ..., e_n), so every product lands in the
last d = n - m coordinates and V^3 = 0 holds structurally.

Vectors are 1-D numpy arrays of field encodings (see `fpbrace.gf`).  Most
functions also accept stacks of vectors with shape (..., n).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DimensionMismatch, InvalidDefiningMatrix, ProductNotOneDimensional
from .gf import GF
from .matfp import MatFp, det, left_kernel, span_basis

__all__ = [
    "AlgebraSpec",
    "DefiningMatrix",
    "StructureConstantAlgebra",
    "ValidityReport",
    "annihilator",
    "circle",
    "circle_inverse",
    "defining_matrix_from_products",
    "delta",
    "gamma",
    "gamma_batch",
    "nilpotency_check",
    "product",
    "product_batch",
    "quotient_by_complement",
    "quotient_map",
    "random_valid_theta",
    "space_elements",
    "validate_defining_matrix",
]


class DefiningMatrix:
    """Symmetric m x m grid with cells in F^d, stored as an (m, m, d) array."""

    __slots__ = ("field", "entries")

    def __init__(self, field: GF, entries):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1 or arr.shape[2] < 1:
            raise DimensionMismatch(f"defining matrix must have shape (m, m, d), got {arr.shape}")
        if arr.min() < 0 or arr.max() >= field.q:
            raise ValueError("defining matrix entries must be encodings in [0, q)")
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("DefiningMatrix is immutable")

    @classmethod
    def from_matrix(cls, B: MatFp) -> DefiningMatrix:
        """The d = 1 defining matrix with scalar cells B[i, j]."""
        return cls(B.field, B.data)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.entries.shape[2]

    def scalar_matrix(self) -> MatFp:
        if self.d != 1:
            raise DimensionMismatch("scalar matrix only exists for d = 1")
        return MatFp(self.field, self.entries[:, :, 0])

    def block(self, i: int) -> np.ndarray:
        """The m x d matrix Theta_i whose j-th row is the cell (i, j)."""
        return self.entries[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, DefiningMatrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.entries, other.entries)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        cells = self.entries[:, :, 0] if self.d == 1 else self.entries
        return f"DefiningMatrix({self.field!r}, {cells.tolist()})"


@dataclass(frozen=True)
class ValidityReport:
    symmetric: bool
    independent: bool
    invertible: bool | None
    asymmetric_cell: tuple[int, int] | None = None
    vanishing_combination: tuple[int, ...] | None = None

    @property
    def valid(self) -> bool:
        return self.symmetric and self.independent


def validate_defining_matrix(theta: DefiningMatrix) -> ValidityReport:
    """Check symmetry and that no nontrivial combination of blocks vanishes.

    The vanishing combination, when present, is the first left-kernel basis
    vector scaled so its leading coefficient is 1.
    """
    F = theta.field
    E = theta.entries
    m, d = theta.m, theta.d
    asym = None
    for i in range(m):
        for j in range(i + 1, m):
            if not np.array_equal(E[i, j], E[j, i]):
                asym = (i, j)
                break
        if asym:
            break
    kernel = left_kernel(F, E.reshape(m, m * d))
    combo = None
    if len(kernel):
        v = kernel[0]
        lead = v[np.flatnonzero(v)[0]]
        combo = tuple(int(c) for c in F.mul(v, F.inv(lead)))
    invertible = None
    if d == 1:
        invertible = det(MatFp(F, E[:, :, 0])).value != 0
    return ValidityReport(
        symmetric=asym is None,
        independent=combo is None,
        invertible=invertible,
        asymmetric_cell=asym,
        vanishing_combination=combo,
    )


class StructureConstantAlgebra:
    """Algebra with e_i . e_j = sum_l c[i, j, l] e_l; no axioms assumed."""

    __slots__ = ("field", "c")

    def __init__(self, field: GF, c):
        arr = np.array(c, dtype=np.int64)
        if arr.ndim != 3 or not (arr.shape[0] == arr.shape[1] == arr.shape[2]):
            raise DimensionMismatch(f"structure constants must have shape (n, n, n), got {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "c", arr)

    def __setattr__(self, name, value):
        raise AttributeError("StructureConstantAlgebra is immutable")

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @classmethod
    def zero(cls, field: GF, n: int) -> StructureConstantAlgebra:
        return cls(field, np.zeros((n, n, n), dtype=np.int64))

    @classmethod
    def truncated_polynomial(cls, field: GF) -> StructureConstantAlgebra:
        """u1 u1 = u2, u1 u2 = u2 u1 = u3 (i.e. u F[u]/(u^4), with u^3 != 0)."""
        c = np.zeros((3, 3, 3), dtype=np.int64)
        c[0, 0, 1] = 1
        c[0, 1, 2] = c[1, 0, 2] = 1
        return cls(field, c)

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.c, self.c.transpose(1, 0, 2)))


class AlgebraSpec:
    """(V, +, .) over `field` with n = m + d and the given defining matrix."""

    __slots__ = ("field", "n", "d", "theta")

    def __init__(self, theta: DefiningMatrix, n: int | None = None, d: int | None = None):
        m, td = theta.m, theta.d
        if d is not None and d != td:
            raise DimensionMismatch(f"d = {d} but defining matrix cells have length {td}")
        if n is not None and n != m + td:
            raise DimensionMismatch(f"n = {n} but defining matrix is {m}x{m} with d = {td}")
        object.__setattr__(self, "field", theta.field)
        object.__setattr__(self, "n", m + td)
        object.__setattr__(self, "d", td)
        object.__setattr__(self, "theta", theta)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraSpec is immutable")

    @classmethod
    def from_matrix(cls, B: MatFp) -> AlgebraSpec:
        return cls(DefiningMatrix.from_matrix(B))

    @classmethod
    def from_rows(cls, field: GF, rows) -> AlgebraSpec:
        """d = 1 algebra from a nested list of scalar defining-matrix entries."""
        return cls.from_matrix(MatFp.from_rows(field, rows))

    @property
    def m(self) -> int:
        return self.n - self.d

    @property
    def size(self) -> int:
        return self.field.q**self.n

    def is_valid(self) -> bool:
        return validate_defining_matrix(self.theta).valid

    def require_valid(self) -> None:
        report = validate_defining_matrix(self.theta)
        if not report.valid:
            raise InvalidDefiningMatrix(f"defining matrix fails validation: {report}")

    def structure_constants(self) -> StructureConstantAlgebra:
        c = np.zeros((self.n,) * 3, dtype=np.int64)
        c[: self.m, : self.m, self.m :] = self.theta.entries
        return StructureConstantAlgebra(self.field, c)

    def vector(self, values) -> np.ndarray:
        return _as_vectors(self, values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraSpec):
            return NotImplemented
        return self.theta == other.theta

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"AlgebraSpec(n={self.n}, d={self.d}, theta={self.theta!r})"


AnyAlgebra = Union[AlgebraSpec, StructureConstantAlgebra]


def _as_vectors(alg: AnyAlgebra, a) -> np.ndarray:
    F = alg.field
    if isinstance(a, np.ndarray):
        arr = a.astype(np.int64, copy=False)
    else:
        arr = np.array([F.encoding(x) for x in a], dtype=np.int64)
    if arr.shape[-1:] != (alg.n,):
        raise DimensionMismatch(f"expected vectors of length {alg.n}, got shape {arr.shape}")
    return arr


def space_elements(field: GF, n: int) -> np.ndarray:
    """All q^n vectors as an (N, n) array in lexicographic order."""
    q = field.q
    idx = np.arange(q**n, dtype=np.int64)
    return (idx[:, None] // q ** np.arange(n - 1, -1, -1, dtype=np.int64)) % q


def vector_index(field: GF, X) -> np.ndarray:
    """Position of vectors in `space_elements` order."""
    X = np.asarray(X, dtype=np.int64)
    n = X.shape[-1]
    return X @ (field.q ** np.arange(n - 1, -1, -1, dtype=np.int64))


def product_batch(alg: AnyAlgebra, X, Y) -> np.ndarray:
    """a . b for stacks of vectors (broadcasting over leading axes)."""
    F = alg.field
    X = _as_vectors(alg, X)
    Y = _as_vectors(alg, Y)
    X, Y = np.broadcast_arrays(X, Y)
    if isinstance(alg, AlgebraSpec):
        m, d = alg.m, alg.d
        U = F.matmul(X[..., None, :m], alg.theta.entries.reshape(m, m * d))
        U = U.reshape(X.shape[:-1] + (m, d))
        Z = F.matmul(Y[..., None, :m], U)[..., 0, :]
        out = np.zeros(X.shape, dtype=np.int64)
        out[..., m:] = Z
        return out
    n = alg.n
    U = F.matmul(X[..., None, :], alg.c.reshape(n, n * n)).reshape(X.shape[:-1] + (n, n))
    return F.matmul(Y[..., None, :], U)[..., 0, :]


def product(a, b, alg: AnyAlgebra) -> np.ndarray:
    """The algebra product a . b."""
    return product_batch(alg, a, b)


def circle(a, b, alg: AnyAlgebra) -> np.ndarray:
    """a o b = a + b + a . b."""
    F = alg.field
    a = _as_vectors(alg, a)
    b = _as_vectors(alg, b)
    return F.add(F.add(a, b), product_batch(alg, a, b))


def circle_inverse(a, alg: AnyAlgebra) -> np.ndarray:
    """-a + a^2 - a^3 + ..., finite because the algebra is nilpotent.

    (The (p - 1)-fold circle power would only do when o has exponent p.)
    """
    F = alg.field
    a = _as_vectors(alg, a)
    term = a
    acc = F.neg(a)
    for i in range(2, alg.n + 1):
        term = product_batch(alg, term, a)
        if not term.any():
            break
        acc = F.add(acc, term if i % 2 == 0 else F.neg(term))
    return acc


def gamma_batch(alg: AlgebraSpec, A) -> np.ndarray:
    """gamma_a for a stack of vectors: shape (..., n, n)."""
    F = alg.field
    A = _as_vectors(alg, A)
    m, d, n = alg.m, alg.d, alg.n
    block = F.matmul(A[..., None, :m], alg.theta.entries.reshape(m, m * d))
    out = np.broadcast_to(np.eye(n, dtype=np.int64), A.shape[:-1] + (n, n)).copy()
    out[..., :m, m:] = block.reshape(A.shape[:-1] + (m, d))
    return out


def gamma(a, alg: AlgebraSpec) -> MatFp:
    """Block unitriangular matrix with x gamma_a = x + x . a."""
    return MatFp(alg.field, gamma_batch(alg, a))


def delta(a, alg: AlgebraSpec) -> MatFp:
    """gamma_a - 1, so that x delta_a = x . a."""
    return gamma(a, alg) - MatFp.identity(alg.field, alg.n)


def annihilator(alg: AnyAlgebra) -> np.ndarray:
    """Basis (rows, reduced echelon) of {a : a . V = 0}."""
    sca = alg.structure_constants() if isinstance(alg, AlgebraSpec) else alg
    n = sca.n
    # row i lists the coordinates of e_i . e_1, ..., e_i . e_n
    return span_basis(sca.field, left_kernel(sca.field, sca.c.reshape(n, n * n)))


def _product_span(sca: StructureConstantAlgebra, basis: np.ndarray) -> np.ndarray:
    """Span of {u . e_j, e_j . u : u in basis}."""
    F = sca.field
    n = sca.n
    if len(basis) == 0:
        return basis
    E = np.eye(n, dtype=np.int64)
    left = product_batch(sca, basis[:, None, :], E[None, :, :]).reshape(-1, n)
    right = product_batch(sca, E[None, :, :], basis[:, None, :]).reshape(-1, n)
    return span_basis(F, np.concatenate([left, right]))


def nilpotency_check(sca: AnyAlgebra) -> int:
    """Smallest t in {2, 3} with V^t = 0, or 4 meaning V^3 != 0 (index >= 4)."""
    if isinstance(sca, AlgebraSpec):
        sca = sca.structure_constants()
    n = sca.n
    v2 = span_basis(sca.field, sca.c.reshape(n * n, n))
    if len(v2) == 0:
        return 2
    v3 = _product_span(sca, v2)
    return 3 if len(v3) == 0 else 4


def defining_matrix_from_products(alg: AnyAlgebra, m: int) -> DefiningMatrix:
    """Read Theta back from the products e_i . e_j, i, j < m."""
    n = alg.n
    E = np.eye(n, dtype=np.int64)
    prods = product_batch(alg, E[:m, None, :], E[None, :m, :])
    if np.any(prods[..., :m]):
        raise InvalidDefiningMatrix("products do not lie in the last n - m coordinates")
    return DefiningMatrix(alg.field, prods[..., m:])


def _product_line(alg: AlgebraSpec) -> np.ndarray:
    cells = alg.theta.entries.reshape(-1, alg.d)
    line = span_basis(alg.field, cells)
    if len(line) != 1:
        raise ProductNotOneDimensional(f"V.V has dimension {len(line)}, expected 1")
    return line[0]


def quotient_map(alg: AlgebraSpec) -> MatFp:
    """n x (m + 1) matrix of V -> V/H with H = {y in Ann(V) : y_r = 0}.

    Here w spans V.V inside Ann(V) (reduced echelon form, so its first nonzero
    coordinate r equals 1) and H is the complement of the line cut out by
    that coordinate.
    """
    m = alg.m
    if alg.d == 1:
        return MatFp.identity(alg.field, alg.n)
    w = _product_line(alg)
    r = int(np.flatnonzero(w)[0])
    Q = np.zeros((alg.n, m + 1), dtype=np.int64)
    Q[np.arange(m), np.arange(m)] = 1
    Q[m + r, m] = 1
    return MatFp(alg.field, Q)


def quotient_by_complement(alg: AlgebraSpec) -> AlgebraSpec:
    """Reduce an algebra with one-dimensional V.V to annihilator dimension 1."""
    if alg.d == 1:
        return alg
    w = _product_line(alg)
    r = int(np.flatnonzero(w)[0])
    # every cell is a multiple s_ij of w, and w_r = 1
    scalars = alg.theta.entries[:, :, r]
    return AlgebraSpec(DefiningMatrix(alg.field, scalars[:, :, None]))


def random_valid_theta(field: GF, m: int, rng: np.random.Generator, d: int = 1) -> DefiningMatrix:
    """Uniformly random valid defining matrix by rejection sampling."""
    while True:
        upper = field.random(rng, (m, m, d))
        iu = np.triu_indices(m, 1)
        upper[iu[1], iu[0]] = upper[iu]
        theta = DefiningMatrix(field, upper)
        if validate_defining_matrix(theta).valid:
            return theta
