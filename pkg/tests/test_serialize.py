"""
Tests for nls_kato.serialize and nls_kato.utils — binary codecs, JSON
rendering, name helpers.
"""

import json

import numpy as np
import pytest

from nls_kato.exceptions import NLSSerializationError
from nls_kato.functionals import Verdict
from nls_kato.serialize import (
    deserialize,
    dump_json,
    dumps_json,
    is_msgpack_available,
    serialize,
    to_jsonable,
)
from nls_kato.utils import cache_file_name, ensure_dir, lock_name, run_dir_name


# ── Helpers ───────────────────────────────────────────────────────────────────

_SAMPLE = {
    "series": np.arange(12, dtype=float).reshape(4, 3),
    "values": np.array([1.0 + 2.0j, -0.5j]),
    "outcome": "Completed",
    "final_dt": 1e-3,
    "events": ["restart"],
}

needs_msgpack = pytest.mark.skipif(not is_msgpack_available(), reason="msgpack not installed")


# ── Binary codecs ─────────────────────────────────────────────────────────────

def test_pickle_round_trip():
    back = deserialize(serialize(_SAMPLE))
    assert np.array_equal(back["series"], _SAMPLE["series"])
    assert np.array_equal(back["values"], _SAMPLE["values"])
    assert back["events"] == ["restart"]


@needs_msgpack
def test_msgpack_round_trip():
    back = deserialize(serialize(_SAMPLE, method="msgpack"), method="msgpack")
    assert back["series"].dtype == np.float64
    assert back["series"].shape == (4, 3)
    assert np.array_equal(back["values"], _SAMPLE["values"])
    assert back["final_dt"] == 1e-3
    back["series"][0, 0] = 99.0


@needs_msgpack
def test_msgpack_packs_enums_and_complex():
    back = deserialize(serialize({"v": Verdict.AT_THRESHOLD, "z": 1 + 1j}, "msgpack"), "msgpack")
    assert back == {"v": "AtThreshold", "z": 1 + 1j}


@needs_msgpack
def test_msgpack_rejects_unknown_objects():
    with pytest.raises(NLSSerializationError):
        serialize({"x": object()}, method="msgpack")


def test_unknown_method():
    with pytest.raises(NLSSerializationError):
        serialize(_SAMPLE, method="yaml")
    with pytest.raises(NLSSerializationError):
        deserialize(b"", method="yaml")


def test_garbage_bytes():
    with pytest.raises(NLSSerializationError):
        deserialize(b"\x00\x01garbage")


# ── JSON ──────────────────────────────────────────────────────────────────────

def test_non_finite_tokens():
    assert to_jsonable([np.nan, np.inf, -np.inf, 1.5]) == ["nan", "inf", "-inf", 1.5]


def test_numpy_and_enum_values():
    out = to_jsonable({"a": np.float64(0.25), "b": np.int64(3), "c": np.bool_(True),
                       "d": Verdict.BELOW_THRESHOLD, "e": (1, 2), "f": 2 - 1j})
    assert out == {"a": 0.25, "b": 3, "c": True, "d": "BelowThreshold",
                   "e": [1, 2], "f": [2.0, -1.0]}
    assert isinstance(out["b"], int)


def test_objects_with_to_dict():
    class Report:
        def to_dict(self):
            return {"x": np.array([1.0, np.nan])}

    assert to_jsonable(Report()) == {"x": [1.0, "nan"]}


def test_unconvertible_object():
    with pytest.raises(NLSSerializationError):
        to_jsonable(object())


def test_json_text_is_deterministic(tmp_path):
    text = dumps_json({"b": 1, "a": [1.0, np.nan]})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [1.0, "nan"], "b": 1}
    path = tmp_path / "summary.json"
    dump_json({"b": 1, "a": [1.0, np.nan]}, str(path))
    assert path.read_text(encoding="utf-8") == text


# ── Names ─────────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("args, expected", [
    ((2.0, 20.0, 4096, 1e-8), "gs_a2p0_r20p0_n4096_t1em08.bin"),
    ((2.5, 40.0, 2048, 1e-10), "gs_a2p5_r40p0_n2048_t1em10.bin"),
])
def test_cache_file_name(args, expected):
    assert cache_file_name(*args) == expected


def test_run_dir_name():
    assert run_dir_name(3, 0.75) == "run_003_beta0p75"
    assert run_dir_name(12, 1.0) == "run_012_beta1p0"


def test_lock_name():
    assert lock_name("/tmp/cache/gs_a2p0.bin") == "nlskato_gs_a2p0"


def test_ensure_dir(tmp_path):
    target = tmp_path / "a" / "b"
    assert ensure_dir(str(target)) == str(target)
    assert target.is_dir()
    ensure_dir(str(target))
