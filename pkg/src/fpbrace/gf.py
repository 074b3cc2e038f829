"""Finite fields F_{p^k} of odd characteristic.

An element of F_{p^k} = F_p[x]/(f) is stored as a single integer: the
coefficient sequence (c_0, ..., c_{k-1}) of its reduced representative is
encoded as c_0 + c_1 p + ... + c_{k-1} p^(k-1).  Integer order is therefore the
canonical element order (constant term least significant), and for k = 1 the
encoding is just the residue mod p.

`GF` exposes "raw" operations on these encodings which accept Python ints or
numpy integer arrays (broadcasting like numpy), and `FieldElement` wraps a
single encoding for ordinary scalar use.
"""

from __future__ import annotations

import enum
import functools
import itertools
from collections.abc import Iterator, Sequence
from typing import Union

import numpy as np

from .errors import (
    DivisionByZero,
    EvenCharacteristic,
    NotASquare,
    NotPrime,
    ReducibleModulus,
    SpecMismatch,
    ZeroInput,
)

__all__ = [
    "GF",
    "FieldElement",
    "SquareClass",
    "find_irreducible",
    "find_nonsquare",
    "inv",
    "is_irreducible",
    "is_prime",
    "is_square",
    "sqrt",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _check_characteristic(p: int) -> None:
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")


# -- polynomials over F_p as coefficient lists, low degree first -------------


def _poly_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_rem(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    """Remainder of f modulo the monic polynomial g over F_p."""
    r = [c % p for c in f]
    dg = len(g) - 1
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i]
        if c:
            shift = i - dg
            for j, gj in enumerate(g):
                r[shift + j] = (r[shift + j] - c * gj) % p
    return _poly_trim(r[:dg] if dg > 0 else [])


def _poly_mulmod(f: Sequence[int], g: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                prod[i + j] = (prod[i + j] + a * b) % p
    return _poly_rem(prod, mod, p)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive factor search: no monic factor of degree 1..k//2 divides."""
    k = len(modulus) - 1
    if k < 1 or modulus[-1] % p != 1:
        return False
    for t in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=t):
            if not _poly_rem(modulus, list(low) + [1], p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def find_irreducible(p: int, k: int = 1) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree k over F_p.

    Candidates x^k + c_{k-1} x^{k-1} + ... + c_0 are scanned in increasing
    order of the integer c_0 + c_1 p + ... (the same order used for field
    elements).  For k = 1 this returns x, so elements are plain residues.
    """
    _check_characteristic(p)
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    for i in range(p**k):
        low = [(i // p**j) % p for j in range(k)]
        cand = tuple(low + [1])
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


class SquareClass(enum.Enum):
    """Class of a nonzero element in F^x / F^x2."""

    SQUARE = "Square"
    NONSQUARE = "NonSquare"


class GF:
    """The field F_{p^k} = F_p[x]/(modulus).

    >>> F = GF(3, 2)
    >>> F.modulus
    (1, 0, 1)
    >>> x = F([0, 1])
    >>> x * x
    GF(3^2)[2, 0]
    """

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        _check_characteristic(p)
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = find_irreducible(p, k)
        else:
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise ValueError(f"modulus must be monic of degree {k}")
            if any(not 0 <= c < p for c in modulus):
                raise ValueError("modulus coefficients must lie in [0, p)")
            if not is_irreducible(modulus, p):
                raise ReducibleModulus(f"{list(modulus)} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus: tuple[int, ...] = tuple(modulus)
        self._powers = np.array([p**i for i in range(k)], dtype=np.int64)

    # -- identity ------------------------------------------------------------

    def _key(self):
        return (self.p, self.k, self.modulus)

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}, modulus={list(self.modulus)})"

    # -- element construction ------------------------------------------------

    def __call__(self, x) -> FieldElement:
        return FieldElement(self, self.coerce(x))

    def coerce(self, x) -> int:
        """Encoding of x.

        Accepts a FieldElement of this field, an int (read as an element of the
        prime subfield, i.e. reduced mod p) or a coefficient sequence.
        """
        if isinstance(x, FieldElement):
            if x.field != self:
                raise SpecMismatch(f"element of {x.field} used in {self}")
            return x.value
        if isinstance(x, (int, np.integer)):
            return int(x) % self.p
        return self.encode(x)

    def encoding(self, x) -> int:
        """Encoding of x, where a bare int is already an encoding in [0, q).

        This is the reading used for array and matrix entries; `coerce` is
        the one used for scalar arithmetic.
        """
        if isinstance(x, FieldElement):
            if x.field != self:
                raise SpecMismatch(f"element of {x.field} used in {self}")
            return x.value
        if isinstance(x, (int, np.integer)):
            if not 0 <= int(x) < self.q:
                raise ValueError(f"encoding {x} out of range for {self}")
            return int(x)
        return self.encode(x)

    def encode(self, coeffs: Sequence[int]) -> int:
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) > self.k:
            coeffs = _poly_rem(coeffs, self.modulus, self.p)
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def decode(self, value: int) -> tuple[int, ...]:
        value = int(value)
        return tuple((value // self.p**i) % self.p for i in range(self.k))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> Iterator[FieldElement]:
        """All elements in canonical order."""
        for v in range(self.q):
            yield FieldElement(self, v)

    # -- tables for k > 1 ----------------------------------------------------

    @functools.cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        for g in range(2, q):
            gp = list(self.decode(g))
            exp = [1]
            cur = [1]
            while True:
                cur = _poly_mulmod(cur, gp, self.modulus, self.p)
                v = self.encode(cur)
                if v == 1:
                    break
                exp.append(v)
            if len(exp) == q - 1:
                exp_arr = np.array(exp, dtype=np.int64)
                log_arr = np.zeros(q, dtype=np.int64)
                log_arr[exp_arr] = np.arange(q - 1, dtype=np.int64)
                return exp_arr, log_arr
        raise AssertionError("no primitive element found")

    @functools.cached_property
    def _reduction(self) -> np.ndarray:
        # row t holds the coefficients of x^t mod f, t < 2k - 1
        k = self.k
        rows = []
        for t in range(2 * k - 1):
            r = _poly_rem([0] * t + [1], self.modulus, self.p)
            rows.append(r + [0] * (k - len(r)))
        return np.array(rows, dtype=np.int64)

    def digits(self, a) -> np.ndarray:
        """Coefficient arrays: shape a.shape + (k,)."""
        return (np.asarray(a, dtype=np.int64)[..., None] // self._powers) % self.p

    def undigits(self, d) -> np.ndarray:
        return (np.asarray(d, dtype=np.int64) % self.p) @ self._powers

    # -- raw vectorized arithmetic on encodings ------------------------------

    def add(self, a, b):
        if self.k == 1:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        return self.undigits(self.digits(a) + self.digits(b))

    def sub(self, a, b):
        if self.k == 1:
            return (np.asarray(a, dtype=np.int64) - b) % self.p
        return self.undigits(self.digits(a) - self.digits(b))

    def neg(self, a):
        if self.k == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        return self.undigits(-self.digits(a))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a * b) % self.p
        exp, log = self._exp_log
        r = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("zero has no multiplicative inverse")
        if self.k == 1:
            return np.vectorize(lambda v: pow(int(v), self.p - 2, self.p), otypes=[np.int64])(a)
        exp, log = self._exp_log
        return exp[(-log[a]) % (self.q - 1)]

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            return self.power(self.inv(a), -e)
        if e == 0:
            return np.ones_like(a)
        if self.k == 1:
            return np.vectorize(lambda v: pow(int(v), e, self.p), otypes=[np.int64])(a)
        exp, log = self._exp_log
        r = exp[(log[a] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, r)

    def matmul(self, A, B) -> np.ndarray:
        """Matrix product of encoded arrays, broadcasting over leading axes."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.k == 1:
            return np.matmul(A, B) % self.p
        Ad = self.digits(A)
        Bd = self.digits(B)
        R = self._reduction
        acc = None
        for s in range(self.k):
            for u in range(self.k):
                term = np.matmul(Ad[..., s], Bd[..., u])[..., None] * R[s + u]
                acc = term if acc is None else acc + term
        return self.undigits(acc % self.p)

    def sum(self, a, axis=-1):
        """Field sum along an axis."""
        if self.k == 1:
            return np.asarray(a, dtype=np.int64).sum(axis=axis) % self.p
        return self.undigits(self.digits(a).sum(axis=axis - 1 if axis < 0 else axis))

    def is_square_raw(self, a) -> np.ndarray:
        """Euler criterion on encodings (zero reports False)."""
        a = np.asarray(a, dtype=np.int64)
        return (self.power(a, (self.q - 1) // 2) == 1) & (a != 0)

    def random(self, rng: np.random.Generator, size=None):
        return rng.integers(0, self.q, size=size, dtype=np.int64)


Scalar = Union["FieldElement", int]


class FieldElement:
    """Immutable element of a `GF`."""

    __slots__ = ("field", "value")

    def __init__(self, field: GF, value: int):
        value = int(value)
        if not 0 <= value < field.q:
            raise ValueError(f"encoding {value} out of range for {field}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.decode(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise SpecMismatch(f"cannot combine elements of {self.field} and {other.field}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def _wrap(self, v) -> FieldElement:
        return FieldElement(self.field, int(v))

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.sub(o, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.mul(self.value, self.field.inv(o)))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.mul(o, self.field.inv(self.value)))

    def __pow__(self, e: int):
        return self._wrap(self.field.power(self.value, int(e)))

    def inverse(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.field.p
        return NotImplemented

    def __lt__(self, other: FieldElement) -> bool:
        return self.value < self._other(other)

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __repr__(self) -> str:
        if self.field.k == 1:
            return f"GF({self.field.p})({self.value})"
        return f"GF({self.field.p}^{self.field.k}){list(self.coeffs)}"

    def __str__(self) -> str:
        if self.field.k == 1:
            return str(self.value)
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            terms.append(f"{coef}{mono}")
        return " + ".join(terms) or "0"


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def is_square(a: FieldElement) -> SquareClass:
    """Square class of a nonzero element by Euler's criterion."""
    if a.value == 0:
        raise ZeroInput("square class is undefined for 0")
    F = a.field
    if int(F.power(a.value, (F.q - 1) // 2)) == 1:
        return SquareClass.SQUARE
    return SquareClass.NONSQUARE


@functools.lru_cache(maxsize=None)
def _first_nonsquare(field: GF) -> int:
    for v in range(1, field.q):
        if int(field.power(v, (field.q - 1) // 2)) != 1:
            return v
    raise AssertionError("odd-order fields always have nonsquares")


def find_nonsquare(field: GF) -> FieldElement:
    """The first nonsquare in canonical element order."""
    return FieldElement(field, _first_nonsquare(field))


def sqrt(a: FieldElement) -> FieldElement:
    """The canonically smaller square root, found by exhaustive search."""
    if a.value == 0:
        raise ZeroInput("sqrt is only defined here for nonzero input")
    if is_square(a) is not SquareClass.SQUARE:
        raise NotASquare(f"{a} is not a square in {a.field}")
    F = a.field
    roots = np.flatnonzero(F.mul(np.arange(F.q), np.arange(F.q)) == a.value)
    return FieldElement(F, int(roots[0]))
