import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qplatesim.fieldio import dumps, loads, read_field, write_field
from qplatesim.grid import Grid, VectorField


def test_header_bytes():
    g = Grid(8, 1.0)
    data = dumps(VectorField(g, np.zeros((8, 8)), np.zeros((8, 8))))
    assert data[:16].hex() == "5150534608000000000000000000f03f"
    assert len(data) == 16 + 2 * 64 * 16


def test_payload_order():
    g = Grid(8, 2.0)
    vx = np.arange(64).reshape(8, 8) + 0.5j
    vy = -vx
    data = dumps(VectorField(g, vx, vy))
    first = np.frombuffer(data, "<f8", count=4, offset=16)
    np.testing.assert_array_equal(first, [0.0, 0.5, 1.0, 0.5])
    tail = np.frombuffer(data, "<f8", count=2, offset=16 + 64 * 16)
    np.testing.assert_array_equal(tail, [-0.0, -0.5])


def test_file_round_trip(tmp_path, rng):
    g = Grid(16, 3.5)
    f = VectorField(g, rng.standard_normal((16, 16)) + 1j, rng.standard_normal((16, 16)) * 1j)
    write_field(tmp_path / "a.qpsf", f)
    h = read_field(tmp_path / "a.qpsf")
    assert h.grid == g
    np.testing.assert_array_equal(h.vx, f.vx)
    np.testing.assert_array_equal(h.vy, f.vy)


def test_rejects_bad_input():
    g = Grid(8, 1.0)
    data = dumps(VectorField(g, np.zeros((8, 8)), np.zeros((8, 8))))
    with pytest.raises(ValueError, match="magic"):
        loads(b"XXXX" + data[4:])
    with pytest.raises(ValueError):
        loads(data[:-1])
    with pytest.raises(ValueError):
        loads(data[:10])


@settings(max_examples=25, deadline=None)
@given(k=st.integers(4, 12), hw=st.floats(1e-3, 1e4), seed=st.integers(0, 2**32 - 1))
def test_round_trip_property(k, hw, seed):
    n = 2 * k
    rng = np.random.default_rng(seed)
    vx = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    vy = rng.standard_normal((n, n)) * 1e-300 + 1j * rng.standard_normal((n, n)) * 1e300
    f = loads(dumps(VectorField(Grid(n, hw), vx, vy)))
    assert f.grid.half_width == hw
    assert np.array_equal(f.vx, vx) and np.array_equal(f.vy, vy)
