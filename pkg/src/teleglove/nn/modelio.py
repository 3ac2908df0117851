"""Versioned binary serialization for float32 and int8 models.

Layout (little-endian):
  magic "TNN1" | version u8 | quantized u8 | n_layers u8 | dims (n_layers+1) x u32
then for float models, per layer: W float32 row-major, b float32.
For int8 models: per activation tensor (input + each hidden output):
scale f32, zero_point i16; then per layer: w_scale f32, W int8, b int32.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Union

import numpy as np

from ..errors import ModelFormatError
from .model import TinyModel
from .quant import ActQuant, QuantModel

MAGIC = b"TNN1"
VERSION = 1

AnyModel = Union[TinyModel, QuantModel]


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def take(self, n: int, field: str) -> bytes:
        if self.pos + n > len(self.data):
            raise ModelFormatError(f"truncated file while reading {field}")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def array(self, dtype: str, count: int, field: str) -> np.ndarray:
        nbytes = np.dtype(dtype).itemsize * count
        return np.frombuffer(self.take(nbytes, field), dtype=dtype).copy()


def save_model(model: AnyModel) -> bytes:
    quantized = isinstance(model, QuantModel)
    dims = model.dims
    out = bytearray()
    out += MAGIC
    out += struct.pack("<BBB", VERSION, int(quantized), len(dims) - 1)
    out += struct.pack(f"<{len(dims)}I", *dims)
    if quantized:
        for act in model.acts:
            out += struct.pack("<fh", act.scale, act.zero_point)
        for w, b, s in zip(model.weights, model.biases, model.w_scales):
            out += struct.pack("<f", s)
            out += w.astype("<i1").tobytes(order="C")
            out += b.astype("<i4").tobytes(order="C")
    else:
        for w, b in zip(model.weights, model.biases):
            out += w.astype("<f4").tobytes(order="C")
            out += b.astype("<f4").tobytes(order="C")
    return bytes(out)


def load_model(data: bytes) -> AnyModel:
    r = _Reader(data)
    magic = r.take(4, "magic")
    if magic != MAGIC:
        raise ModelFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    version, quantized, n_layers = struct.unpack("<BBB", r.take(3, "version"))
    if version != VERSION:
        raise ModelFormatError(f"unsupported version {version}")
    if quantized not in (0, 1):
        raise ModelFormatError(f"bad quantized flag {quantized}")
    if n_layers < 1:
        raise ModelFormatError(f"bad dims: n_layers={n_layers}")
    dims = struct.unpack(f"<{n_layers + 1}I", r.take(4 * (n_layers + 1), "dims"))
    if any(d < 1 for d in dims):
        raise ModelFormatError(f"bad dims: {dims}")

    if quantized:
        acts = []
        for i in range(n_layers):
            scale, zp = struct.unpack("<fh", r.take(6, f"activation quantizer {i}"))
            acts.append(ActQuant(float(scale), int(zp)))
        weights, biases, w_scales = [], [], []
        for i, (n_in, n_out) in enumerate(zip(dims, dims[1:])):
            (s_w,) = struct.unpack("<f", r.take(4, f"layer {i} weight scale"))
            w = r.array("<i1", n_in * n_out, f"layer {i} weights").reshape(n_in, n_out)
            b = r.array("<i4", n_out, f"layer {i} biases")
            weights.append(w.astype(np.int8))
            biases.append(b.astype(np.int32))
            w_scales.append(float(s_w))
        model: AnyModel = QuantModel(weights, biases, w_scales, acts)
    else:
        weights, biases = [], []
        for i, (n_in, n_out) in enumerate(zip(dims, dims[1:])):
            w = r.array("<f4", n_in * n_out, f"layer {i} weights").reshape(n_in, n_out)
            b = r.array("<f4", n_out, f"layer {i} biases")
            weights.append(w)
            biases.append(b)
        model = TinyModel(weights, biases)

    if r.pos != len(data):
        raise ModelFormatError(f"{len(data) - r.pos} trailing bytes after payload")
    return model


def save_file(model: AnyModel, path: str | Path) -> int:
    blob = save_model(model)
    Path(path).write_bytes(blob)
    return len(blob)


def load_file(path: str | Path) -> AnyModel:
    return load_model(Path(path).read_bytes())


def header_bytes(n_layers: int) -> int:
    """Fixed-header size for a model with the given layer count."""
    return 4 + 3 + 4 * (n_layers + 1)
