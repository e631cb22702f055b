"""Shared JSON conventions.

A complex number is ``[re, im]`` (a bare real number is accepted on input),
a vector is a list of complex numbers and a matrix is a row-major list of
vectors.  Output floats carry 17 significant digits so that reports
round-trip exactly and identical runs give identical bytes.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np


def parse_complex(x) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    raise ValueError(f"not a complex number: {x!r}")


def parse_vector(v) -> np.ndarray:
    if not isinstance(v, (list, tuple)):
        raise ValueError("a vector must be a JSON array")
    return np.array([parse_complex(x) for x in v], dtype=complex)


def parse_matrix(m) -> np.ndarray:
    if not isinstance(m, (list, tuple)) or not m:
        raise ValueError("a matrix must be a nonempty JSON array of rows")
    rows = [parse_vector(r) for r in m]
    if len({r.shape for r in rows}) != 1:
        raise ValueError("matrix rows have different lengths")
    return np.stack(rows)


def complex_to_json(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def vector_to_json(v) -> list:
    return [complex_to_json(z) for z in np.asarray(v).ravel()]


def matrix_to_json(M) -> list:
    return [vector_to_json(row) for row in np.asarray(M)]


def to_jsonable(obj):
    """Convert numpy scalars/arrays and Fractions to plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            if obj.ndim == 1:
                return vector_to_json(obj)
            if obj.ndim == 2:
                return matrix_to_json(obj)
            return [to_jsonable(x) for x in obj]
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        return "0.0"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _dump(obj, out: list[str], indent: int, level: int) -> None:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," if indent else ", "
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(sep)
            out.append(pad + json.dumps(str(k)) + ": ")
            _dump(v, out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        scalar = all(not isinstance(v, (dict, list, tuple)) for v in obj)
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", " if scalar or not indent else sep)
            if not scalar:
                out.append(pad)
            _dump(v, out, indent, level + 1)
        out.append((end if not scalar else "") + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _dump(to_jsonable(obj), out, indent, 0)
    return "".join(out) + "\n"
