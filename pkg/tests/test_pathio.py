import numpy as np
import pytest

from partgauss.pathio import (
    MAGIC,
    FormatError,
    read_pgsp,
    read_samples_csv,
    read_samples_pgsp,
    read_segment,
    write_pgsp,
    write_samples_csv,
    write_segment,
)
from partgauss.process import VectorStream, generate_segment


def test_segment_round_trip(tmp_path):
    seg = generate_segment(VectorStream(2**63 + 5, 3), -17, 1000)
    path = tmp_path / "p.pgsp"
    write_segment(path, seg)
    back = read_segment(path)
    assert (back.offset, back.k, back.root_seed) == (-17, 3, 2**63 + 5)
    np.testing.assert_array_equal(back.values, seg.values)
    raw = path.read_bytes()
    assert raw[:4] == MAGIC and len(raw) == 36 + 8 * 1000


def test_samples_pgsp_round_trip(tmp_path):
    x = np.random.default_rng(0).normal(size=(50, 4))
    write_pgsp(tmp_path / "s.pgsp", x, 4, 10, 1)
    header, back = read_samples_pgsp(tmp_path / "s.pgsp")
    assert header.length == 200 and header.offset == 10
    np.testing.assert_array_equal(back, x)


def test_csv_round_trip_is_exact(tmp_path):
    x = np.random.default_rng(1).normal(size=(30, 3)) * 1e-7
    write_samples_csv(tmp_path / "s.csv", x)
    assert (tmp_path / "s.csv").read_text().splitlines()[0] == "x1,x2,x3"
    np.testing.assert_array_equal(read_samples_csv(tmp_path / "s.csv"), x)


def test_malformed_files(tmp_path):
    p = tmp_path / "bad"
    p.write_bytes(b"PGS")
    with pytest.raises(FormatError):
        read_pgsp(p)
    write_pgsp(p, np.ones(3), 3, 0, 0)
    raw = bytearray(p.read_bytes())
    with pytest.raises(FormatError):
        (tmp_path / "m").write_bytes(b"XXXX" + raw[4:])
        read_pgsp(tmp_path / "m")
    with pytest.raises(FormatError):
        (tmp_path / "t").write_bytes(bytes(raw[:-8]))
        read_pgsp(tmp_path / "t")
    write_pgsp(p, np.ones(4), 3, 0, 0)
    with pytest.raises(FormatError):
        read_samples_pgsp(p)
    (tmp_path / "c.csv").write_text("a,b\n1,2\n")
    with pytest.raises(FormatError):
        read_samples_csv(tmp_path / "c.csv")
