"""
TNS1 tensor files.

Layout (all little-endian):
    bytes 0-3    ASCII "TNS1"
    byte  4      dtype: 0 = float64, 1 = complex128 (interleaved re, im)
    bytes 5-16   n1, n2, n3 as u32
    payload      slice-major, then row-major within each frontal slice
"""

import logging
import struct
from pathlib import Path

import numpy as np

from sketchlab.constants import (
    TNS_DTYPE_COMPLEX,
    TNS_DTYPE_REAL,
    TNS_HEADER_SIZE,
    TNS_MAGIC,
    TNS_MAX_DIM,
)
from sketchlab.errors import DomainError, TensorFileError
from sketchlab.tensors.tensor3 import Tensor3

logger = logging.getLogger(__name__)

_DIMS = struct.Struct("<III")
_ITEM = {TNS_DTYPE_REAL: np.dtype("<f8"), TNS_DTYPE_COMPLEX: np.dtype("<c16")}
_MAX_PAYLOAD = 2**62


def decode_tensor(raw):
    """Parse TNS1 bytes into (Tensor3, is_real)."""
    if len(raw) < TNS_HEADER_SIZE:
        raise TensorFileError(
            f"truncated header: need {TNS_HEADER_SIZE} bytes, got {len(raw)}", offset=len(raw)
        )
    if raw[:4] != TNS_MAGIC:
        raise TensorFileError(f"bad magic {raw[:4]!r}, expected {TNS_MAGIC!r}", offset=0)
    dtype_code = raw[4]
    if dtype_code not in _ITEM:
        raise TensorFileError(f"unknown dtype code {dtype_code}", offset=4)
    n1, n2, n3 = _DIMS.unpack_from(raw, 5)
    item = _ITEM[dtype_code]
    expected = n1 * n2 * n3 * item.itemsize
    if expected > _MAX_PAYLOAD:
        raise TensorFileError(f"dimensions {n1}x{n2}x{n3} overflow the payload size", offset=5)
    payload = len(raw) - TNS_HEADER_SIZE
    if payload < expected:
        raise TensorFileError(
            f"truncated payload: {n1}x{n2}x{n3} needs {expected} bytes, found {payload}",
            offset=len(raw),
        )
    if payload > expected:
        raise TensorFileError(
            f"{payload - expected} trailing bytes after payload", offset=TNS_HEADER_SIZE + expected
        )
    if expected == 0:
        values = np.zeros(0, dtype=item)
    else:
        values = np.frombuffer(raw, dtype=item, count=n1 * n2 * n3, offset=TNS_HEADER_SIZE)
    data = values.reshape(n3, n1, n2).transpose(1, 2, 0)
    try:
        tensor = Tensor3(data)
    except DomainError as exc:
        raise TensorFileError(str(exc), offset=TNS_HEADER_SIZE) from exc
    return tensor, dtype_code == TNS_DTYPE_REAL


def encode_tensor(t, dtype="auto"):
    """TNS1 bytes for `t`; dtype "auto" writes float64 when every imaginary part is zero."""
    if dtype == "auto":
        dtype = "real" if not np.any(t.data.imag) else "complex"
    if dtype == "real":
        if np.any(t.data.imag):
            raise DomainError("cannot store a tensor with nonzero imaginary parts as real")
        code = TNS_DTYPE_REAL
        values = t.data.real
    elif dtype == "complex":
        code = TNS_DTYPE_COMPLEX
        values = t.data
    else:
        raise DomainError(f"unknown TNS1 dtype {dtype!r}")
    if max(t.shape) > TNS_MAX_DIM:
        raise TensorFileError(f"dimension exceeds u32 range: {t.shape}")
    header = TNS_MAGIC + bytes([code]) + _DIMS.pack(*t.shape)
    body = np.ascontiguousarray(values.transpose(2, 0, 1), dtype=_ITEM[code]).tobytes()
    return header + body


def load_tensor_file(path):
    tensor, _ = load_tensor_file_with_kind(path)
    return tensor


def load_tensor_file_with_kind(path):
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise TensorFileError(f"cannot read {path}: {exc}") from exc
    tensor, is_real = decode_tensor(raw)
    logger.info("loaded %s tensor %s from %s", "real" if is_real else "complex", tensor, path)
    return tensor, is_real


def save_tensor_file(t, path, dtype="auto"):
    path = Path(path)
    raw = encode_tensor(t, dtype)
    try:
        path.write_bytes(raw)
    except OSError as exc:
        raise TensorFileError(f"cannot write {path}: {exc}") from exc
    logger.info("wrote %s (%d bytes)", path, len(raw))
