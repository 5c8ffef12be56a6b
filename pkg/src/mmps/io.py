"""JSON model files and report encoding.

Infinite matrix entries are written as the strings ``"eps"`` (only legal in
``A``) and ``"top"`` (only legal in ``B``). Floats go through ``repr``,
which round-trips every double exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .model import MmpsSystem, QUANTITY, TEMPORAL
from .tropical import EPS, TOP

FORMAT_VERSION = "1.0"


class ModelFormatError(ValueError):
    """The model file cannot be parsed; the message names the offending location."""


_SENTINELS = {"A": ("eps", EPS), "B": ("top", TOP)}


def encode_matrix(M: np.ndarray, name: str) -> list:
    word, value = _SENTINELS.get(name, (None, None))
    out = []
    for row in M:
        enc = []
        for v in row:
            if word is not None and v == value:
                enc.append(word)
            elif not math.isfinite(v):
                raise ValueError(f"{name} holds an infinite entry that has no encoding")
            else:
                enc.append(float(v))
        out.append(enc)
    return out


def system_to_dict(system: MmpsSystem) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "n": system.n, "m": system.m, "p": system.p,
        "kind_x": list(system.kind_x), "kind_y": list(system.kind_y), "kind_z": list(system.kind_z),
        "A": encode_matrix(system.A, "A"),
        "B": encode_matrix(system.B, "B"),
        "C": encode_matrix(system.C, "C"),
        "D": encode_matrix(system.D, "D"),
        "state_names": list(system.names()),
    }


def _decode_matrix(data, name: str, shape: tuple[int, int]) -> np.ndarray:
    rows, cols = shape
    if not isinstance(data, list) or len(data) != rows:
        raise ModelFormatError(f"{name}: expected {rows} rows")
    M = np.empty(shape)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise ModelFormatError(f"{name}[{i}]: expected {cols} entries")
        for j, v in enumerate(row):
            where = f"{name}[{i}][{j}]"
            if isinstance(v, str):
                word, value = _SENTINELS.get(name, (None, None))
                if v not in ("eps", "top"):
                    raise ModelFormatError(f"{where}: unknown token {v!r}")
                if v != word:
                    raise ModelFormatError(f"{where}: illegal sentinel {v!r} in {name}")
                M[i, j] = value
            elif isinstance(v, (int, float)) and not isinstance(v, bool):
                if not math.isfinite(v):
                    raise ModelFormatError(f"{where}: non-finite number")
                M[i, j] = float(v)
            else:
                raise ModelFormatError(f"{where}: expected a number, got {type(v).__name__}")
    return M


def system_from_dict(d: dict) -> MmpsSystem:
    if not isinstance(d, dict):
        raise ModelFormatError("top level must be an object")
    for key in ("n", "m", "p", "A", "B", "C", "D", "kind_x", "kind_y", "kind_z"):
        if key not in d:
            raise ModelFormatError(f"missing field {key!r}")
    version = str(d.get("format_version", FORMAT_VERSION))
    if version.split(".")[0] != FORMAT_VERSION.split(".")[0]:
        raise ModelFormatError(f"unsupported format_version {version!r}")
    try:
        n, m, p = (int(d[k]) for k in ("n", "m", "p"))
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(f"n, m, p must be integers: {exc}") from None
    A = _decode_matrix(d["A"], "A", (n, m))
    B = _decode_matrix(d["B"], "B", (m, p))
    C = _decode_matrix(d["C"], "C", (p, n))
    D = _decode_matrix(d["D"], "D", (p, n))
    for key, size in (("kind_x", n), ("kind_y", m), ("kind_z", p)):
        kinds = d[key]
        if not isinstance(kinds, list) or len(kinds) != size or \
                any(k not in (TEMPORAL, QUANTITY) for k in kinds):
            raise ModelFormatError(f"{key}: expected {size} entries of 't' or 'q'")
    names = d.get("state_names")
    try:
        return MmpsSystem(A=A, B=B, C=C, D=D, kind_x=d["kind_x"], kind_y=d["kind_y"],
                          kind_z=d["kind_z"], state_names=names)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None


def dumps_model(system: MmpsSystem) -> str:
    return json.dumps(system_to_dict(system), indent=1)


def loads_model(text: str) -> MmpsSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return system_from_dict(data)


def save_model(system: MmpsSystem, path) -> None:
    Path(path).write_text(dumps_model(system) + "\n")


def load_model(path) -> MmpsSystem:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ModelFormatError(f"cannot read {path}: {exc.strerror}") from None
    return loads_model(text)


def jsonable(obj):
    """Convert report values (arrays, complex numbers, infinities) to plain JSON types.

    Infinite floats outside model matrices become ``"inf"`` / ``"-inf"``;
    complex numbers become ``[re, im]``.
    """
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v + 0.0   # folds -0.0 into 0.0
    return obj


def dumps_report(report) -> str:
    return json.dumps(jsonable(report), indent=1, sort_keys=False)
