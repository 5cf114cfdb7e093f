"""Single-file model container.

Layout (all integers little-endian)::

    magic          4 bytes   b"FAEM"
    version        uint16    FORMAT_VERSION
    header_len     uint32    byte length of the JSON header
    header         utf-8 JSON, sorted keys: architecture, standardizer,
                   threshold, param_shapes, param_count
    params         param_count float64 values, little-endian, in
                   ``AutoencoderModel.parameters()`` order (C order per array)
    checksum       uint32    CRC-32 of every preceding byte

Scalars in the header (standardizer mean/std, alpha) are stored with
``float.hex`` so they round-trip bit-exactly.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import FormatError
from ..windowing import Standardizer
from .model import AutoencoderModel

MAGIC = b"FAEM"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<4sHI")


@dataclass
class SavedModel:
    model: AutoencoderModel
    standardizer: Standardizer | None = None
    threshold: object | None = None  # detector.Threshold


def _hex(x):
    return float(x).hex()


def model_bytes(model, standardizer=None, threshold=None) -> bytes:
    params = model.parameters()
    header = {
        "architecture": model.describe(),
        "param_shapes": [list(p.shape) for p in params],
        "param_count": int(sum(p.size for p in params)),
        "standardizer": None
        if standardizer is None
        else {"mean": _hex(standardizer.mean), "std": _hex(standardizer.std)},
        "threshold": None
        if threshold is None
        else {
            "alpha": _hex(threshold.alpha),
            "calibration_size": int(threshold.calibration_size),
            "loss_kind": threshold.loss_kind,
        },
    }
    head = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    body = b"".join(np.ascontiguousarray(p, dtype="<f8").tobytes() for p in params)
    blob = _PREFIX.pack(MAGIC, FORMAT_VERSION, len(head)) + head + body
    return blob + struct.pack("<I", zlib.crc32(blob))


def save_model(path, model, standardizer=None, threshold=None) -> None:
    Path(path).write_bytes(model_bytes(model, standardizer, threshold))


def parse_model_bytes(data: bytes) -> SavedModel:
    if len(data) < _PREFIX.size + 4:
        raise FormatError("model file is truncated")
    magic, version, head_len = _PREFIX.unpack_from(data)
    if magic != MAGIC:
        raise FormatError("not a model file (bad magic bytes)")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported model format version {version} (expected {FORMAT_VERSION})")
    (stored_crc,) = struct.unpack("<I", data[-4:])
    if zlib.crc32(data[:-4]) != stored_crc:
        raise FormatError("model file is truncated or corrupt (checksum mismatch)")
    try:
        header = json.loads(data[_PREFIX.size : _PREFIX.size + head_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"unreadable model header: {exc}") from None

    body = data[_PREFIX.size + head_len : -4]
    count = header["param_count"]
    if len(body) != 8 * count:
        raise FormatError(f"expected {count} parameters, file holds {len(body) / 8:g}")
    flat = np.frombuffer(body, dtype="<f8").astype(np.float64)

    model = AutoencoderModel.from_description(header["architecture"])
    values, offset = [], 0
    for shape in header["param_shapes"]:
        size = int(np.prod(shape))
        values.append(flat[offset : offset + size].reshape(shape))
        offset += size
    model.set_parameters(values)

    std = header.get("standardizer")
    standardizer = None if std is None else Standardizer(
        float.fromhex(std["mean"]), float.fromhex(std["std"])
    )
    thr = header.get("threshold")
    threshold = None
    if thr is not None:
        from ..detector import Threshold

        threshold = Threshold(float.fromhex(thr["alpha"]), thr["calibration_size"], thr["loss_kind"])
    return SavedModel(model, standardizer, threshold)


def load_model(path) -> SavedModel:
    return parse_model_bytes(Path(path).read_bytes())
