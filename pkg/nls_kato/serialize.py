"""
Serialization helpers for nls_kato.

Two binary backends are supported for saved trajectories:

* ``pickle``   – built-in, handles any Python object (default).
* ``msgpack``  – compact and language-neutral; requires the ``msgpack``
                 package (``pip install msgpack``).  numpy arrays are
                 packed as ``{dtype, shape, data}`` maps.

JSON output for run summaries goes through :func:`to_jsonable` so numpy
scalars, arrays, enums and non-finite floats all have one deterministic
rendering.
"""

import json
import math
import pickle
import logging
from enum import Enum

import numpy as np

from .exceptions import NLSSerializationError

logger = logging.getLogger("nlskato.serialize")

try:
    import msgpack as _msgpack
    _MSGPACK_AVAILABLE = True
except ImportError:
    _MSGPACK_AVAILABLE = False

_NDARRAY_TAG = "__ndarray__"
_COMPLEX_TAG = "__complex__"


def is_msgpack_available() -> bool:
    """Return ``True`` if the ``msgpack`` package is installed."""
    return _MSGPACK_AVAILABLE


# ── msgpack hooks ────────────────────────────────────────────────────────────

def _msgpack_default(obj):
    if isinstance(obj, np.ndarray):
        arr = np.ascontiguousarray(obj)
        return {_NDARRAY_TAG: True, "dtype": arr.dtype.str,
                "shape": list(arr.shape), "data": arr.tobytes()}
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, (complex, np.complexfloating)):
        return {_COMPLEX_TAG: True, "re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, Enum):
        return obj.value
    raise TypeError(f"cannot pack object of type {type(obj).__name__}")


def _msgpack_object_hook(obj):
    if obj.get(_NDARRAY_TAG):
        return np.frombuffer(obj["data"], dtype=np.dtype(obj["dtype"])).reshape(obj["shape"]).copy()
    if obj.get(_COMPLEX_TAG):
        return complex(obj["re"], obj["im"])
    return obj


def _require_msgpack() -> None:
    if not _MSGPACK_AVAILABLE:
        raise NLSSerializationError("msgpack is not installed. Run: pip install msgpack")


# ── Binary codecs ────────────────────────────────────────────────────────────

def serialize(obj, method: str = "pickle") -> bytes:
    """Serialize *obj* to bytes using the chosen *method*.

    Args:
        obj:    A trajectory dict (or any object for pickle).
        method: ``"pickle"`` (default) or ``"msgpack"``.

    Raises:
        NLSSerializationError: Encoding failed or msgpack is missing.

    Example::

        payload = serialize(trajectory.to_dict(), method="msgpack")
    """
    if method == "pickle":
        try:
            return pickle.dumps(obj, protocol=pickle.HIGHEST_PROTOCOL)
        except Exception as exc:
            raise NLSSerializationError(f"pickle serialization failed: {exc}") from exc

    if method == "msgpack":
        _require_msgpack()
        try:
            return _msgpack.packb(obj, default=_msgpack_default, use_bin_type=True)
        except Exception as exc:
            raise NLSSerializationError(f"msgpack serialization failed: {exc}") from exc

    raise NLSSerializationError(f"Unknown serialization method: {method!r}")


def deserialize(data: bytes, method: str = "pickle"):
    """Inverse of :func:`serialize`; *method* must match.

    Raises:
        NLSSerializationError: Decoding failed.
    """
    if method == "pickle":
        try:
            return pickle.loads(data)
        except Exception as exc:
            raise NLSSerializationError(f"pickle deserialization failed: {exc}") from exc

    if method == "msgpack":
        _require_msgpack()
        try:
            return _msgpack.unpackb(data, object_hook=_msgpack_object_hook,
                                    raw=False, strict_map_key=False)
        except Exception as exc:
            raise NLSSerializationError(f"msgpack deserialization failed: {exc}") from exc

    raise NLSSerializationError(f"Unknown serialization method: {method!r}")


# ── JSON ─────────────────────────────────────────────────────────────────────

def _float_token(x: float):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def to_jsonable(obj):
    """Convert *obj* into plain JSON types.

    Non-finite floats become the strings ``"nan"``, ``"inf"``, ``"-inf"``;
    complex numbers become ``[re, im]``; tuples become lists.
    """
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float_token(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return [_float_token(float(obj.real)), _float_token(float(obj.imag))]
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise NLSSerializationError(f"cannot convert {type(obj).__name__} to JSON")


def dumps_json(obj) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def dump_json(obj, path: str) -> None:
    """Write :func:`dumps_json` output to *path*."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(obj))
