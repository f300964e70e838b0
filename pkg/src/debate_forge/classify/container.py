"""Binary model container.

Layout (all integers little-endian)::

    b"DFMD1"
    u32 model count
    per model:
        u32 name length, name (UTF-8)
        u32 metadata length, metadata (UTF-8 JSON, sorted keys)
        u32 array count
        per array: u8 dtype code (b'f' float64, b'i' int64), u32 ndim,
                   u64 per dimension, raw little-endian data

Metadata carries the model kind, labels, vocabulary and configuration;
arrays carry the parameters.
"""

from __future__ import annotations

import io
import json
import struct
from pathlib import Path
from typing import Mapping

import numpy as np

from .baseline import HingeModel, TfidfVectorizer
from .features import Vocabulary
from .model import LinearEmbedModel, TrainConfig, config_dict

MAGIC = b"DFMD1"
_DTYPES = {b"f": np.dtype("<f8"), b"i": np.dtype("<i8")}


class ModelFormatError(ValueError):
    pass


def _pack(model) -> tuple[dict, list[np.ndarray]]:
    if isinstance(model, LinearEmbedModel):
        meta = {
            "kind": "embed",
            "labels": list(model.labels),
            "label_counts": list(model.label_counts),
            "vocab": list(model.vocab.words),
            "config": config_dict(model.cfg),
            "train_loss": list(model.train_loss),
        }
        return meta, [model.row_ids.astype("<i8"), model.emb, model.out]
    if isinstance(model, HingeModel):
        meta = {
            "kind": "tfidf_hinge",
            "labels": list(model.labels),
            "terms": list(model.vectorizer.terms),
            "max_n": model.vectorizer.max_n,
            "alpha": model.alpha,
            "epochs": model.epochs,
            "seed": model.seed,
        }
        return meta, [model.vectorizer.idf, model.weights, model.bias]
    raise TypeError(f"cannot serialize {type(model).__name__}")


def _unpack(meta: dict, arrays: list[np.ndarray]):
    kind = meta.get("kind")
    if kind == "embed":
        row_ids, emb, out = arrays
        return LinearEmbedModel(
            labels=list(meta["labels"]),
            label_counts=list(meta["label_counts"]),
            vocab=Vocabulary(tuple(meta["vocab"])),
            cfg=TrainConfig(**meta["config"]),
            row_ids=row_ids,
            emb=emb,
            out=out,
            train_loss=list(meta["train_loss"]),
        )
    if kind == "tfidf_hinge":
        idf, weights, bias = arrays
        vec = TfidfVectorizer(tuple(meta["terms"]), idf, int(meta["max_n"]))
        return HingeModel(list(meta["labels"]), vec, weights, bias, meta["alpha"], meta["epochs"], meta["seed"])
    raise ModelFormatError(f"unknown model kind {kind!r}")


def dumps_models(models: Mapping[str, object]) -> bytes:
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<I", len(models)))
    for name, model in models.items():
        meta, arrays = _pack(model)
        raw_name = name.encode("utf-8")
        raw_meta = json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("utf-8")
        buf.write(struct.pack("<I", len(raw_name)) + raw_name)
        buf.write(struct.pack("<I", len(raw_meta)) + raw_meta)
        buf.write(struct.pack("<I", len(arrays)))
        for arr in arrays:
            arr = np.asarray(arr)
            code = b"i" if arr.dtype.kind in "iu" else b"f"
            data = np.ascontiguousarray(arr, dtype=_DTYPES[code])
            buf.write(code + struct.pack("<I", data.ndim))
            buf.write(struct.pack(f"<{data.ndim}Q", *data.shape))
            buf.write(data.tobytes())
    return buf.getvalue()


def loads_models(blob: bytes) -> dict[str, object]:
    view = memoryview(blob)
    pos = 0

    def take(n: int) -> memoryview:
        nonlocal pos
        if pos + n > len(view):
            raise ModelFormatError("truncated model file")
        chunk = view[pos:pos + n]
        pos += n
        return chunk

    if bytes(take(len(MAGIC))) != MAGIC:
        raise ModelFormatError("not a model file (bad magic)")
    (count,) = struct.unpack("<I", take(4))
    models = {}
    for _ in range(count):
        (n,) = struct.unpack("<I", take(4))
        name = bytes(take(n)).decode("utf-8")
        (n,) = struct.unpack("<I", take(4))
        meta = json.loads(bytes(take(n)).decode("utf-8"))
        (n_arrays,) = struct.unpack("<I", take(4))
        arrays = []
        for _ in range(n_arrays):
            code = bytes(take(1))
            if code not in _DTYPES:
                raise ModelFormatError(f"unknown dtype code {code!r}")
            (ndim,) = struct.unpack("<I", take(4))
            shape = struct.unpack(f"<{ndim}Q", take(8 * ndim))
            dtype = _DTYPES[code]
            size = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
            arrays.append(np.frombuffer(bytes(take(size)), dtype=dtype).reshape(shape).astype(dtype.newbyteorder("=")))
        models[name] = _unpack(meta, arrays)
    if pos != len(view):
        raise ModelFormatError("trailing bytes after last model")
    return models


def save_models(models: Mapping[str, object], path: str | Path) -> None:
    Path(path).write_bytes(dumps_models(models))


def load_models(path: str | Path) -> dict[str, object]:
    return loads_models(Path(path).read_bytes())
