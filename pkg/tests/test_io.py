import json
import math

import numpy as np
import pytest

from fractalzeta.exceptions import SchemaMismatch
from fractalzeta.io import format_number, read_csv, read_json, write_csv, write_json


def test_format_number():
    assert format_number(3) == "3"
    assert format_number(0.1) == "0.1"
    assert format_number(np.float64(1 / 3)) == repr(1 / 3)
    assert format_number(math.inf) == "inf"
    assert format_number(True) == "true"


def test_csv_roundtrip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    rows = rng.normal(size=(50, 3)).tolist()
    path = write_csv(tmp_path / "a.csv", ("x", "y", "z"), rows)
    assert read_csv(path, ("x", "y", "z")) == rows


def test_csv_header_mismatch(tmp_path):
    path = write_csv(tmp_path / "a.csv", ("x", "y"), [(1, 2)])
    with pytest.raises(SchemaMismatch):
        read_csv(path, ("x", "z"))
    (tmp_path / "b.csv").write_text("x,y\n1,oops\n")
    with pytest.raises(SchemaMismatch):
        read_csv(tmp_path / "b.csv", ("x", "y"))
    (tmp_path / "c.csv").write_text("")
    with pytest.raises(SchemaMismatch):
        read_csv(tmp_path / "c.csv", ("x", "y"))


def test_json_is_sorted_and_clean(tmp_path):
    path = write_json(tmp_path / "a.json", {"b": np.float64(1.5), "a": [math.nan, np.bool_(True)]})
    text = path.read_text()
    assert text.index('"a"') < text.index('"b"')
    assert read_json(path) == {"a": ["nan", True], "b": 1.5}
    json.loads(text)


def test_bad_json(tmp_path):
    (tmp_path / "x.json").write_text("{nope")
    with pytest.raises(SchemaMismatch):
        read_json(tmp_path / "x.json")


def test_atomic_write_leaves_no_temp_files(tmp_path):
    for _ in range(3):
        write_json(tmp_path / "a.json", {"k": 1})
    assert [p.name for p in tmp_path.iterdir()] == ["a.json"]
