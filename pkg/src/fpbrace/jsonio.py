"""JSON encodings of the library's objects.

Field elements are written as plain ints over a prime field and as
coefficient lists (constant term first) over extension fields; both forms
are accepted on input.  Every document that carries matrices or algebras
embeds its FieldSpec, so files are self-describing.
"""

from __future__ import annotations

import json
import sys
from collections.abc import Iterable
from typing import Any

import numpy as np

from .algebra import AlgebraSpec, DefiningMatrix
from .brace import Verdict
from .classify import ClassLabel, IsoWitness
from .errors import FormatError, FpBraceError
from .gf import GF, FieldElement
from .holomorph import AffineMap, SubgroupTable
from .matfp import MatFp

__all__ = [
    "affine_from_json",
    "affine_to_json",
    "algebra_from_json",
    "algebra_to_json",
    "classification_to_json",
    "dump_lines",
    "element_from_json",
    "element_to_json",
    "error_to_json",
    "field_from_json",
    "field_to_json",
    "load_json",
    "matrix_from_json",
    "matrix_to_json",
    "subgroup_to_json",
    "vector_from_json",
    "vector_to_json",
    "verdict_from_json",
    "verdict_to_json",
    "witness_to_json",
]


def _require(doc: Any, key: str):
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(f"missing key {key!r}")
    return doc[key]


# -- fields and elements ----------------------------------------------------


def field_to_json(F: GF) -> dict:
    return {"p": F.p, "k": F.k, "modulus": list(F.modulus)}


def field_from_json(doc: Any) -> GF:
    p = _require(doc, "p")
    k = doc.get("k", 1)
    modulus = doc.get("modulus")
    if not isinstance(p, int) or not isinstance(k, int):
        raise FormatError("p and k must be integers")
    return GF(p, k, modulus)


def element_to_json(F: GF, value) -> int | list[int]:
    v = int(value.value if isinstance(value, FieldElement) else value)
    return v if F.k == 1 else list(F.decode(v))


def element_from_json(F: GF, doc: Any) -> int:
    """Encoding of a JSON element: an int in [0, q) or a coefficient list."""
    if isinstance(doc, bool):
        raise FormatError("booleans are not field elements")
    if isinstance(doc, int):
        if not 0 <= doc < F.q:
            raise FormatError(f"element {doc} out of range [0, {F.q})")
        return doc
    if isinstance(doc, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in doc):
        if len(doc) > F.k or any(not 0 <= c < F.p for c in doc):
            raise FormatError(f"bad coefficient list {doc} for {F!r}")
        return F.encode(doc)
    raise FormatError(f"cannot read a field element from {doc!r}")


def vector_to_json(F: GF, v) -> list:
    return [element_to_json(F, x) for x in np.asarray(v).reshape(-1)]


def vector_from_json(F: GF, doc: Any) -> np.ndarray:
    if not isinstance(doc, list):
        raise FormatError("a vector must be a list")
    return np.array([element_from_json(F, x) for x in doc], dtype=np.int64)


# -- matrices and algebras ----------------------------------------------------


def _rows_to_json(F: GF, data: np.ndarray) -> list[list]:
    return [vector_to_json(F, row) for row in data]


def _rows_from_json(F: GF, rows: Any) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise FormatError("rows must be a nonempty list of lists")
    if len({len(r) for r in rows}) != 1:
        raise FormatError("rows have different lengths")
    return np.array([vector_from_json(F, r) for r in rows], dtype=np.int64)


def matrix_to_json(M: MatFp, with_field: bool = True) -> dict:
    doc = {"rows": _rows_to_json(M.field, M.data)}
    if with_field:
        doc = {"field": field_to_json(M.field), **doc}
    return doc


def matrix_from_json(doc: Any, field: GF | None = None) -> MatFp:
    F = field if field is not None else field_from_json(_require(doc, "field"))
    return MatFp(F, _rows_from_json(F, _require(doc, "rows")))


def algebra_to_json(alg: AlgebraSpec) -> dict:
    F = alg.field
    E = alg.theta.entries
    if alg.d == 1:
        theta = _rows_to_json(F, E[:, :, 0])
    else:
        theta = [[vector_to_json(F, cell) for cell in row] for row in E]
    return {"field": field_to_json(F), "n": alg.n, "d": alg.d, "theta": theta}


def algebra_from_json(doc: Any) -> AlgebraSpec:
    """Cells are field elements when d = 1, or lists of d elements."""
    F = field_from_json(_require(doc, "field"))
    rows = _require(doc, "theta")
    if not isinstance(rows, list) or not rows:
        raise FormatError("theta must be a nonempty list of rows")
    m = len(rows)
    if any(not isinstance(r, list) or len(r) != m for r in rows):
        raise FormatError("theta must be square")
    d = doc.get("d")
    if d is None:
        d = _cell_length(F, rows[0][0])
    cells = []
    for r in rows:
        out = []
        for c in r:
            if _cell_length(F, c) != d:
                raise FormatError(f"each cell must hold {d} element(s)")
            c = c if _is_vector_cell(F, c) else [c]
            out.append([element_from_json(F, x) for x in c])
        cells.append(out)
    alg = AlgebraSpec(DefiningMatrix(F, np.array(cells, dtype=np.int64)))
    n = doc.get("n")
    if n is not None and n != alg.n:
        raise FormatError(f"n = {n} does not match the defining matrix (n = {alg.n})")
    return alg


def _is_vector_cell(F: GF, cell: Any) -> bool:
    """Is this cell a list of elements (rather than one coefficient-list element)?"""
    if not isinstance(cell, list):
        return False
    return F.k == 1 or any(isinstance(x, list) for x in cell)


def _cell_length(F: GF, cell: Any) -> int:
    return len(cell) if _is_vector_cell(F, cell) else 1


# -- maps, verdicts, classifications ----------------------------------------


def affine_to_json(f: AffineMap) -> dict:
    return {"linear": _rows_to_json(f.field, f.linear.data), "translation": vector_to_json(f.field, f.translation)}


def affine_from_json(F: GF, doc: Any) -> AffineMap:
    L = MatFp(F, _rows_from_json(F, _require(doc, "linear")))
    return AffineMap(L, vector_from_json(F, _require(doc, "translation")))


def verdict_to_json(v: Verdict, field: GF | None = None) -> dict:
    """Witness vectors are written as element lists when ``field`` is given."""
    witness = v.witness
    if witness is not None and field is not None:
        witness = [vector_to_json(field, w) for w in witness]
    return {"pass": v.passed, "axiom": v.axiom, "witness": witness, "mode": v.mode, "seed": v.seed}


def verdict_from_json(doc: Any) -> Verdict:
    return Verdict(
        bool(_require(doc, "pass")),
        _require(doc, "axiom"),
        _require(doc, "witness"),
        _require(doc, "mode"),
        doc.get("seed"),
    )


def witness_to_json(w: IsoWitness | None) -> dict | None:
    if w is None:
        return None
    F = w.A.field
    return {"A": _rows_to_json(F, w.A.data), "l": element_to_json(F, w.l)}


def classification_to_json(label: ClassLabel, witness: IsoWitness | None, count: int) -> dict:
    return {"class": label.form.value, "witness": witness_to_json(witness), "count": count}


def subgroup_to_json(t: SubgroupTable) -> dict:
    return {
        "field": field_to_json(t.field),
        "n": t.n,
        "maps": [affine_to_json(f) for f in t.maps()],
    }


# -- files ----------------------------------------------------------------------


def load_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from exc


def dump_lines(records: Iterable[dict]) -> str:
    """JSON lines, one record per line."""
    return "".join(json.dumps(r, sort_keys=False) + "\n" for r in records)


def error_to_json(exc: FpBraceError) -> dict:
    return {"error": exc.code, "detail": str(exc)}
