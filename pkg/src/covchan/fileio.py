"""JSON channel files and report formatting.

Complex numbers are stored as ``[re, im]`` pairs. A channel file looks like::

    {"dim": 3, "label": "...", "kraus": [[[[re, im], ...], ...], ...],
     "meta": {...}, "signs": [1, -1, ...]}

``signs`` is optional and only written for maps that are not completely
positive.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .channel import Channel


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} in input")


def loads(text: str):
    return json.loads(text, parse_constant=_reject_constant)


def encode_matrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(rows, d: int | None = None) -> np.ndarray:
    try:
        M = np.array([[complex(*_pair(z)) for z in row] for row in rows], dtype=complex)
    except TypeError as exc:
        raise ValueError(f"malformed matrix: {exc}") from None
    if M.ndim != 2 or (d is not None and M.shape != (d, d)):
        raise ValueError(f"matrix has shape {M.shape}, expected ({d}, {d})")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def _pair(z):
    if isinstance(z, list) and len(z) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z):
        return float(z[0]), float(z[1])
    raise ValueError(f"complex entries must be [re, im] pairs, got {z!r}")


def jsonable(x):
    """Recursively convert numpy and complex values to plain JSON types."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        return z.real if z.imag == 0 else [z.real, z.imag]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            raise ValueError("cannot serialize a non-finite number")
        return x
    return x


def channel_to_dict(ch: Channel) -> dict:
    doc = {
        "dim": ch.d,
        "label": ch.label,
        "kraus": [encode_matrix(K) for K in ch.kraus],
        "meta": jsonable(ch.meta),
    }
    if ch.signed:
        doc["signs"] = [int(s) for s in ch.signs]
    return doc


def channel_from_dict(doc) -> Channel:
    if not isinstance(doc, dict):
        raise ValueError("channel file must contain a JSON object")
    for key in ("dim", "kraus"):
        if key not in doc:
            raise ValueError(f"channel file lacks {key!r}")
    d = doc["dim"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ValueError(f"'dim' must be a positive integer, got {d!r}")
    kraus = doc["kraus"]
    if not isinstance(kraus, list) or not kraus:
        raise ValueError("'kraus' must be a nonempty list of matrices")
    K = np.array([decode_matrix(M, d) for M in kraus])
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise ValueError("'meta' must be an object")
    return Channel(K, doc.get("signs"), str(doc.get("label", "")), meta)


def write_channel(ch: Channel, path) -> None:
    Path(path).write_text(json.dumps(channel_to_dict(ch), indent=1, allow_nan=False) + "\n")


def read_channel(path) -> Channel:
    return channel_from_dict(loads(Path(path).read_text()))


def read_choi(path) -> np.ndarray:
    doc = loads(Path(path).read_text())
    if not isinstance(doc, dict) or "choi" not in doc or "dim" not in doc:
        raise ValueError("Choi file must be an object with 'dim' and 'choi'")
    d = doc["dim"]
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"'dim' must be a positive integer, got {d!r}")
    return decode_matrix(doc["choi"], d * d)


def fmt12(x: float) -> str:
    return f"{x:.12g}"
