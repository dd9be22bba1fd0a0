import numpy as np
import pytest

from partgauss.errors import InvalidInputError
from partgauss.process import (
    PathSegment,
    VectorStream,
    generate_segment,
    sliding_products,
    vector_at,
    window_samples,
)


class ConstantStub:
    """X_{n,c} = c (1-based coordinate)."""

    def __init__(self, k):
        self.k = k

    def vector_at(self, n):
        return np.arange(1, self.k + 1, dtype=float)


class RecordingStub:
    """X_{n,c} = 10 n + c, logging every vector index read."""

    def __init__(self, k):
        self.k = k
        self.seen = set()

    def vector_at(self, n):
        self.seen.add(n)
        return 10.0 * n + np.arange(1, self.k + 1)


def test_constant_stub_gives_triangular_sum():
    seg = generate_segment(ConstantStub(3), 0, 10)
    np.testing.assert_array_equal(seg.values, np.full(10, 6.0))
    seg = generate_segment(ConstantStub(5), -7, 4)
    np.testing.assert_array_equal(seg.values, np.full(4, 15.0))


def test_routing_rule_with_recording_stub():
    k = 3
    stub = RecordingStub(k)
    seg = generate_segment(stub, 4, 5)
    for n in range(4, 9):
        # Y_n = X_{n,3} + X_{n+1,2} + X_{n+2,1}
        assert seg.at(n) == (10 * n + 3) + (10 * (n + 1) + 2) + (10 * (n + 2) + 1)
    assert stub.seen == set(range(4, 4 + 5 + k - 1))


@pytest.mark.parametrize("k", [2, 3, 4])
def test_kernel_path_matches_generic_loop(k):
    stream = VectorStream(99, k)

    class Wrapped:
        def __init__(self):
            self.k = k

        def vector_at(self, n):
            return stream.vector_at(n)

    fast = generate_segment(stream, -20, 60).values
    slow = generate_segment(Wrapped(), -20, 60).values
    np.testing.assert_allclose(fast, slow, rtol=0, atol=1e-12)


def test_overlapping_segments_agree_bitwise():
    stream = VectorStream(2024, 3)
    a = generate_segment(stream, 0, 100)
    b = generate_segment(stream, 50, 100)
    np.testing.assert_array_equal(a.values[50:], b.values[:50])
    c = generate_segment(stream, -500, 1000)
    np.testing.assert_array_equal(c.values[500:600], a.values)


def test_chunked_long_path_matches_pieces():
    stream = VectorStream(5, 4)
    whole = generate_segment(stream, 10, 200_000).values
    parts = np.concatenate([generate_segment(stream, 10 + s, 50_000).values for s in range(0, 200_000, 50_000)])
    np.testing.assert_array_equal(whole, parts)


def test_vector_stream_is_index_addressed():
    stream = VectorStream(1, 3)
    v = stream.vectors(np.array([5, -3, 5, 2**40]))
    np.testing.assert_array_equal(v[0], v[2])
    np.testing.assert_array_equal(v[1], vector_at(stream, -3))
    assert not np.array_equal(v[0], VectorStream(2, 3).vector_at(5))


def test_segment_value_from_vectors():
    stream = VectorStream(11, 3)
    seg = generate_segment(stream, 7, 3)
    for n in range(7, 10):
        x = [stream.vector_at(n + j) for j in range(3)]
        assert seg.at(n) == pytest.approx(x[0][2] + x[1][1] + x[2][0], abs=1e-13)


def test_segment_metadata_and_bounds():
    seg = generate_segment(VectorStream(3, 2), -4, 6)
    assert len(seg) == 6 and seg.k == 2 and seg.root_seed == 3
    np.testing.assert_array_equal(seg.indices, np.arange(-4, 2))
    with pytest.raises(IndexError):
        seg.at(2)
    with pytest.raises(InvalidInputError):
        generate_segment(VectorStream(3, 2), 0, 0)


def test_sliding_products():
    np.testing.assert_array_equal(sliding_products(np.array([1.0, 2.0, 3.0]), 2), [2.0, 6.0])
    np.testing.assert_array_equal(sliding_products(np.array([1.0, 2.0, 3.0]), 3), [6.0])
    v = np.random.default_rng(0).normal(size=20)
    np.testing.assert_array_equal(sliding_products(v, 1), v)
    seg = PathSegment(0, v, None, 3)
    np.testing.assert_allclose(sliding_products(seg, 3), v[:-2] * v[1:-1] * v[2:], rtol=1e-15)
    with pytest.raises(InvalidInputError):
        sliding_products(v, 0)
    with pytest.raises(InvalidInputError):
        sliding_products(v[:2], 3)


@pytest.mark.parametrize("bad", [dict(k=1), dict(seed=-1), dict(sign=0.5)])
def test_stream_validation(bad):
    with pytest.raises(InvalidInputError):
        VectorStream(bad.get("seed", 0), bad.get("k", 3), bad.get("sign", 1.0))


def test_window_samples_layout():
    stream = VectorStream(8, 3)
    idx = [0, 4]
    x = window_samples(stream, idx, 5, base=100)
    stride = 4 + 3
    for r in range(5):
        seg = generate_segment(stream, 100 + r * stride, 5)
        assert x[r, 0] == pytest.approx(seg.values[0], abs=1e-13)
        assert x[r, 1] == pytest.approx(seg.values[4], abs=1e-13)
    with pytest.raises(InvalidInputError):
        window_samples(stream, [], 5)
    with pytest.raises(InvalidInputError):
        window_samples(stream, [0], 0)


def test_window_realizations_use_disjoint_vectors():
    k, idx, n = 3, [0, 2, 9], 6
    stride = 9 + k
    reads = [{r * stride + i + j for i in idx for j in range(k)} for r in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            assert not reads[a] & reads[b]
