"""EMB1 binary writer (the selection toolkit's embedding interchange format).

Layout, all integers little-endian: magic ``EMB1``, u32 record count,
u32 dimension, then per record a u16 id byte length, the UTF-8 id
bytes, and ``dim`` float32 components.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Sequence

import numpy as np

MAGIC = b"EMB1"


def write_emb1(records: Sequence[tuple[str, np.ndarray]], path: str | Path) -> None:
    if not records:
        raise ValueError("refusing to write an empty EMB1 file")
    dim = int(np.asarray(records[0][1]).shape[0])
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", len(records), dim))
        for uid, vector in records:
            vec32 = np.ascontiguousarray(vector, dtype="<f4")
            if vec32.shape != (dim,):
                raise ValueError(f"vector for {uid!r} has shape {vec32.shape}, expected ({dim},)")
            if not np.isfinite(vec32).all():
                raise ValueError(f"vector for {uid!r} contains NaN or Inf")
            id_bytes = uid.encode("utf-8")
            fh.write(struct.pack("<H", len(id_bytes)))
            fh.write(id_bytes)
            fh.write(vec32.tobytes())


def read_emb1(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Minimal reader, for tests and sanity checks."""
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise ValueError(f"{path}: not an EMB1 file")
    count, dim = struct.unpack_from("<II", data, 4)
    ids: list[str] = []
    vectors = np.empty((count, dim), dtype=np.float32)
    offset = 12
    for i in range(count):
        (id_len,) = struct.unpack_from("<H", data, offset)
        offset += 2
        ids.append(data[offset : offset + id_len].decode("utf-8"))
        offset += id_len
        vectors[i] = np.frombuffer(data, dtype="<f4", count=dim, offset=offset)
        offset += 4 * dim
    if offset != len(data):
        raise ValueError(f"{path}: trailing bytes")
    return ids, vectors
