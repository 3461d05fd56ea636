"""Binary density-matrix snapshots.

Each frame is a 16-byte header (little-endian int64 ``N``, int64 step index)
followed by the N x N matrix in row-major order as little-endian float64
(real, imag) pairs. A file is a concatenation of frames.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterator, Tuple

import numpy as np

from .errors import DomainError

__all__ = ["write_frame", "write_frames", "read_frames", "read_frame"]

_HEADER = np.dtype("<i8")
_BODY = np.dtype("<c16")


def write_frame(fh, matrix, step: int) -> None:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError("snapshot matrix must be square")
    fh.write(np.array([m.shape[0], step], dtype=_HEADER).tobytes())
    fh.write(np.ascontiguousarray(m, dtype=_BODY).tobytes())


def write_frames(path, matrices, steps) -> None:
    with Path(path).open("wb") as fh:
        for m, s in zip(matrices, steps):
            write_frame(fh, m, int(s))


def read_frames(path) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield (step, matrix) for every frame in ``path``."""
    data = Path(path).read_bytes()
    pos = 0
    while pos < len(data):
        if len(data) - pos < 16:
            raise DomainError(f"{path}: truncated header at byte {pos}")
        n, step = np.frombuffer(data, dtype=_HEADER, count=2, offset=pos)
        pos += 16
        size = int(n) * int(n) * 16
        if n <= 0 or len(data) - pos < size:
            raise DomainError(f"{path}: truncated or corrupt frame at byte {pos - 16}")
        body = np.frombuffer(data, dtype=_BODY, count=int(n) * int(n), offset=pos)
        pos += size
        yield int(step), body.reshape(int(n), int(n)).astype(complex)


def read_frame(path, index: int = -1) -> Tuple[int, np.ndarray]:
    frames = list(read_frames(path))
    if not frames:
        raise DomainError(f"{path}: no frames")
    return frames[index]
