"""PGSP binary files and CSV sample files.

PGSP layout, little-endian::

    magic   4 bytes  b"PGSP"
    version u32
    k       u32
    offset  i64      first index (path) or first vector index (samples)
    length  u64      number of float64 values that follow
    seed    u64
    values  length x f64

Paths store Y_{offset..offset+length-1}. Sample files store draws of the law
row-major, so length = N * k.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .process import PathSegment

MAGIC = b"PGSP"
VERSION = 1
_HEADER = struct.Struct("<4sIIqQQ")


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class PGSPHeader:
    version: int
    k: int
    offset: int
    length: int
    root_seed: int


def write_pgsp(path, values, k: int, offset: int, root_seed: int) -> PGSPHeader:
    vals = np.ascontiguousarray(values, dtype="<f8").ravel()
    header = PGSPHeader(VERSION, int(k), int(offset), vals.size, int(root_seed))
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, header.version, header.k, header.offset, header.length, header.root_seed))
        fh.write(vals.tobytes())
    return header


def read_pgsp(path) -> tuple[PGSPHeader, np.ndarray]:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: truncated header")
    magic, version, k, offset, length, seed = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    body = raw[_HEADER.size:]
    if len(body) != 8 * length:
        raise FormatError(f"{path}: expected {length} values, found {len(body) / 8:g}")
    values = np.frombuffer(body, dtype="<f8").astype(np.float64)
    return PGSPHeader(version, k, offset, length, seed), values


def write_segment(path, segment: PathSegment) -> PGSPHeader:
    return write_pgsp(path, segment.values, segment.k, segment.offset, segment.root_seed or 0)


def read_segment(path) -> PathSegment:
    header, values = read_pgsp(path)
    return PathSegment(header.offset, values, header.root_seed, header.k)


def read_samples_pgsp(path) -> tuple[PGSPHeader, np.ndarray]:
    header, values = read_pgsp(path)
    if header.k == 0 or header.length % header.k:
        raise FormatError(f"{path}: {header.length} values do not form rows of k={header.k}")
    return header, values.reshape(-1, header.k)


def write_samples_csv(path, samples) -> None:
    x = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    header = ",".join(f"x{j + 1}" for j in range(x.shape[1]))
    np.savetxt(path, x, fmt="%.17g", delimiter=",", header=header, comments="")


def read_samples_csv(path) -> np.ndarray:
    with open(path) as fh:
        cols = fh.readline().strip().split(",")
    if not cols or cols != [f"x{j + 1}" for j in range(len(cols))]:
        raise FormatError(f"{path}: header must be x1,...,xk")
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
