import json
import math
import struct

import numpy as np
import pytest
from hypothesis import given, settings

from pathrisk.io import (
    MAGIC,
    CorruptEnsembleFile,
    dumps_json,
    load_ensemble,
    read_csv,
    read_prsk,
    save_ensemble,
    sha256_file,
    write_prsk,
)
from pathrisk.paths import PathEnsemble

from .conftest import ensembles


@settings(max_examples=40, deadline=None)
@given(ensembles())
def test_prsk_roundtrip(tmp_path_factory, e):
    path = tmp_path_factory.mktemp("io") / "e.prsk"
    write_prsk(path, e)
    back = read_prsk(path)
    assert np.array_equal(back.values, e.values)
    assert np.array_equal(back.probs, e.probs)
    assert np.array_equal(back.grid.t, e.grid.t)


def test_prsk_layout(tmp_path, two_path):
    path = tmp_path / "e.prsk"
    write_prsk(path, two_path)
    blob = path.read_bytes()
    assert blob[:5] == MAGIC
    assert struct.unpack_from("<QQ", blob, 5) == (2, 4)
    assert len(blob) == 21 + 8 * (5 + 2 + 10)
    grid = np.frombuffer(blob, "<f8", count=5, offset=21)
    np.testing.assert_array_equal(grid, two_path.grid.t)


def test_csv_roundtrip(tmp_path, two_path):
    path = tmp_path / "e.csv"
    save_ensemble(path, two_path)
    back = load_ensemble(path)
    assert np.array_equal(back.values, two_path.values)
    assert np.array_equal(back.grid.t, two_path.grid.t)
    assert path.read_text().splitlines()[0].startswith("0,")


def test_single_path_csv(tmp_path):
    e = PathEnsemble.from_arrays([[0.0, 1.0, -2.0]])
    path = tmp_path / "one.csv"
    save_ensemble(path, e)
    assert len(path.read_text().splitlines()) == 2
    assert load_ensemble(path).n_paths == 1


def test_bad_magic(tmp_path, two_path):
    path = tmp_path / "e.prsk"
    write_prsk(path, two_path)
    blob = bytearray(path.read_bytes())
    blob[:5] = b"XXXXX"
    path.write_bytes(bytes(blob))
    with pytest.raises(CorruptEnsembleFile):
        read_prsk(path)
    with pytest.raises(CorruptEnsembleFile):
        load_ensemble(path)


@pytest.mark.parametrize("cut", [3, 21, -8])
def test_wrong_length(tmp_path, two_path, cut):
    path = tmp_path / "e.prsk"
    write_prsk(path, two_path)
    path.write_bytes(path.read_bytes()[:cut])
    with pytest.raises(CorruptEnsembleFile):
        read_prsk(path)


def test_trailing_bytes(tmp_path, two_path):
    path = tmp_path / "e.prsk"
    write_prsk(path, two_path)
    path.write_bytes(path.read_bytes() + b"\0")
    with pytest.raises(CorruptEnsembleFile):
        read_prsk(path)


def test_bad_probs_in_file(tmp_path, two_path):
    path = tmp_path / "e.prsk"
    write_prsk(path, two_path.with_values(two_path.values))
    blob = bytearray(path.read_bytes())
    blob[21 + 40:21 + 48] = struct.pack("<d", 5.0)
    path.write_bytes(bytes(blob))
    with pytest.raises(CorruptEnsembleFile):
        read_prsk(path)


def test_empty_csv(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("0,1\n")
    with pytest.raises(CorruptEnsembleFile):
        read_csv(path)


def test_sha256(tmp_path):
    path = tmp_path / "x"
    path.write_bytes(b"abc")
    assert sha256_file(path) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def test_json_full_precision():
    x = 0.1 + 0.2
    text = dumps_json({"x": x})
    assert "0.30000000000000004" in text
    assert json.loads(text)["x"] == x


def test_json_nonfinite_and_order():
    text = dumps_json({"b": math.inf, "a": [-math.inf, 1, True, None], "c": np.float64(0.5)})
    data = json.loads(text)
    assert data == {"a": ["-inf", 1, True, None], "b": "inf", "c": 0.5}
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert float(data["b"]) == math.inf


def test_json_rejects_objects():
    with pytest.raises(TypeError):
        dumps_json({"x": object()})
