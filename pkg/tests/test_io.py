import json

import numpy as np
import pytest

from rpchain.chain import ChainFrame, assemble, term
from rpchain.io import (
    FormatError,
    dumps_report,
    parse_operator_text,
    read_array,
    read_operator,
    write_array,
    write_complex_csv,
)

from conftest import random_density, random_vector


def test_parse_operator_text():
    text = """
    # Ising bond and field
    -1 0 1:X 2:X   # bond
    -1 0 1:Z

    0.5 0.25
    """
    terms = parse_operator_text(text)
    assert [t.coefficient for t in terms] == [-1, -1, 0.5 + 0.25j]
    assert terms[0].letters == {1: "X", 2: "X"}
    assert terms[2].letters == {}


@pytest.mark.parametrize(
    "bad",
    ["1", "a 0 1:X", "1 0 1X", "1 0 x:X", "1 0 1:X 1:Z", "1 0 1:"],
)
def test_parse_operator_rejects_malformed(bad):
    with pytest.raises(FormatError):
        parse_operator_text(bad)


def test_read_operator(tmp_path):
    f = ChainFrame(1)
    path = tmp_path / "h.txt"
    path.write_text("-2 0 1:X 2:X\n-1 0 1:Z\n-1 0 2:Z\n")
    op = read_operator(path, f)
    expected = assemble([term(-2, {1: "X", 2: "X"}), term(-1, {1: "Z"}), term(-1, {2: "Z"})], f)
    assert np.allclose(op.matrix, expected.matrix)
    path.write_text("1 0 3:X\n")
    with pytest.raises(FormatError):
        read_operator(path, f)


def test_array_round_trip(tmp_path, rng):
    v = random_vector(rng, 8)
    rho = random_density(rng, 4)
    write_array(tmp_path / "v.txt", v)
    write_array(tmp_path / "r.txt", rho)
    assert np.array_equal(read_array(tmp_path / "v.txt"), v)
    assert np.array_equal(read_array(tmp_path / "r.txt"), rho)
    assert (tmp_path / "r.txt").read_text().splitlines()[0] == "4 4"


@pytest.mark.parametrize("content", ["", "2\n1 0\n", "2 3\n", "2\n1 0 0\n0 0\n", "x\n"])
def test_read_array_rejects_malformed(tmp_path, content):
    path = tmp_path / "bad.txt"
    path.write_text(content)
    with pytest.raises(FormatError):
        read_array(path)


def test_complex_csv(tmp_path):
    path = tmp_path / "m.csv"
    write_complex_csv(path, np.array([[1 + 2j, 0.5], [0, -1j]]))
    rows = path.read_text().splitlines()
    assert rows[0] == "1,2,0.5,0"
    assert rows[1] == "0,0,-0,-1"


def test_dumps_report_formatting():
    text = dumps_report({"b": 0.1, "a": [1.0 / 3, float("nan")], "flag": np.bool_(True), "z": 1 + 2j})
    data = json.loads(text)
    assert data["schema"] == 1
    assert data["a"][0] == 1.0 / 3 and data["a"][1] is None
    assert data["flag"] is True and data["z"] == [1, 2]
    assert "0.10000000000000001" in text
    assert list(data) == sorted(data)
