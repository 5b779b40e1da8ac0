import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from xwigner import io as xio
from xwigner.crosswigner import PhaseSpaceField
from xwigner.errors import ConfigError, GridIOError

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=40, deadline=None)
@given(hnp.arrays(np.complex128, st.tuples(st.integers(1, 6), st.integers(1, 6)),
                  elements=st.complex_numbers(allow_nan=False, allow_infinity=False)))
def test_binary_round_trip_bit_exact(tmp_path_factory, v):
    path = tmp_path_factory.mktemp("bin") / "g.bin"
    a0 = np.arange(v.shape[0]) * 0.1 - 1e-7
    a1 = np.arange(v.shape[1]) * 3.0
    xio.write_grid_bin(path, a0, a1, v)
    b0, b1, w = xio.read_grid_bin(path)
    assert b0.tobytes() == a0.tobytes() and b1.tobytes() == a1.tobytes()
    assert w.tobytes() == v.tobytes()


@settings(max_examples=25, deadline=None)
@given(hnp.arrays(np.complex128, (3, 4),
                  elements=st.complex_numbers(allow_nan=False, allow_infinity=False,
                                              max_magnitude=1e300)))
def test_csv_round_trip_exact(tmp_path_factory, v):
    path = tmp_path_factory.mktemp("csv") / "g.csv"
    xio.write_grid_csv(path, [0.0, 1e-6, 2e-6], [-1.0, 0.0, 1.0, 2.0], v, {"run_id": "r"})
    a0, a1, w, meta = xio.read_grid_csv(path)
    assert w.tobytes() == v.tobytes()
    assert meta["run_id"] == "r" and meta["axes"] == "x,k"


def test_field_round_trip(tmp_path):
    f = PhaseSpaceField(np.linspace(-1, 1, 5), np.linspace(0, 2, 3),
                        np.arange(15).reshape(5, 3) * (0.1 + 0.3j), "oracle", {"t": 0.05})
    xio.write_field(tmp_path / "f.csv", f)
    g = xio.read_field(tmp_path / "f.csv")
    assert g.provenance == "oracle" and g.meta["t"] == "0.05"
    np.testing.assert_array_equal(g.values, f.values)
    xio.write_field(tmp_path / "f.bin", f, "bin")
    h = xio.read_field(tmp_path / "f.bin", provenance="oracle")
    assert h.values.tobytes() == f.values.tobytes()
    with pytest.raises(ConfigError):
        xio.write_field(tmp_path / "f.x", f, "hdf")


def test_deterministic_bytes(tmp_path):
    v = np.exp(1j * np.arange(12.0)).reshape(3, 4)
    for name in ("a", "b"):
        xio.write_grid_csv(tmp_path / f"{name}.csv", range(3), range(4), v, {"k": 1.5})
        xio.write_grid_bin(tmp_path / f"{name}.bin", range(3), range(4), v)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()


def test_bad_binary_files(tmp_path):
    p = tmp_path / "bad.bin"
    p.write_bytes(b"XWIG")
    with pytest.raises(GridIOError, match="truncated"):
        xio.read_grid_bin(p)
    p.write_bytes(b"NOPE1" + bytes(8))
    with pytest.raises(GridIOError, match="magic"):
        xio.read_grid_bin(p)
    xio.write_grid_bin(p, [0.0, 1.0], [0.0], np.ones((2, 1)))
    p.write_bytes(p.read_bytes()[:-3])
    with pytest.raises(GridIOError, match="expected"):
        xio.read_grid_bin(p)
    with pytest.raises(GridIOError):
        xio.read_grid_bin(tmp_path / "missing.bin")


def test_bad_text_files(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("# nx=3\n# nk=2\nx,k,re,im\n1,2,3,4\n")
    with pytest.raises(GridIOError, match="rows"):
        xio.read_grid_csv(p)
    p.write_text("x,k,re,im\n1,2,3,4\n")
    with pytest.raises(GridIOError, match="size"):
        xio.read_grid_csv(p)


def test_shape_mismatch(tmp_path):
    with pytest.raises(ConfigError):
        xio.write_grid_bin(tmp_path / "a.bin", [0, 1], [0, 1], np.ones((3, 2)))
    with pytest.raises(ConfigError):
        xio.write_grid_csv(tmp_path / "a.csv", [0, 1], [0, 1], np.ones((3, 2)))


def test_unwritable_path(tmp_path):
    (tmp_path / "file").write_text("")
    with pytest.raises(GridIOError):
        xio.write_grid_bin(tmp_path / "file" / "sub" / "a.bin", [0, 1], [0], np.ones((2, 1)))


def test_config_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# neutron run\ngamma = -1\ntau_window=0,100,50  # ms\n\n")
    assert xio.read_config_file(p) == {"gamma": "-1", "tau-window": "0,100,50"}
    p.write_text("gamma -1\n")
    with pytest.raises(ConfigError, match="key=value"):
        xio.read_config_file(p)


def test_table(tmp_path):
    xio.write_table(tmp_path / "t.csv", {"a": [1.0, 2.0], "b": [3, 4]}, {"run_id": "x"})
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines == ["# run_id=x", "a,b", "1,3", "2,4"]
