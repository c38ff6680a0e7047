"""Checkpoint file: JSON manifest followed by a raw float64 section.

Layout::

    b"DHCKPT01" | manifest length (u64, little-endian) | manifest JSON | data

The manifest lists every array with its shape and byte offset into the data
section, plus a SHA-256 of the data so truncation or corruption is caught
on load.
"""
from __future__ import annotations

import hashlib
import json
import os
import struct
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import CheckpointError, IncompatibleCheckpointError
from .network import PolicyParams, from_arrays
from .optim import AdamState

MAGIC = b"DHCKPT01"
_PARAM, _M, _V = "param/", "adam.m/", "adam.v/"


def feature_fingerprint(norm_fingerprint: str, window: int) -> str:
    """Identity of the observation layout: fitted feature stats plus window length."""
    return hashlib.sha256(f"{norm_fingerprint}:{int(window)}".encode()).hexdigest()


@dataclass(eq=False)
class Checkpoint:
    params: PolicyParams
    update: int
    valid_sharpe: float | None
    train_sharpe: float | None
    seed: int
    env_config: dict
    train_config: dict
    feature_fingerprint: str
    env_fingerprint: str
    optimizer: AdamState | None = None
    extra: dict = field(default_factory=dict)

    def manifest_fields(self) -> dict:
        return {
            "update": int(self.update),
            "valid_sharpe": self.valid_sharpe,
            "train_sharpe": self.train_sharpe,
            "seed": int(self.seed),
            "env_config": self.env_config,
            "train_config": self.train_config,
            "feature_fingerprint": self.feature_fingerprint,
            "env_fingerprint": self.env_fingerprint,
            "input_dim": self.params.input_dim,
            "hidden": list(self.params.hidden),
            "adam_step": None if self.optimizer is None else int(self.optimizer.step),
            "extra": self.extra,
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, Checkpoint):
            return NotImplemented
        return to_bytes(self) == to_bytes(other)

    def check_compatible(self, feature_fp: str, input_dim: int | None = None) -> None:
        """Refuse evaluation on a panel whose feature layout differs from training."""
        if input_dim is not None and input_dim != self.params.input_dim:
            raise IncompatibleCheckpointError(
                f"checkpoint expects observations of length {self.params.input_dim}, "
                f"current panel/window gives {input_dim}"
            )
        if feature_fp != self.feature_fingerprint:
            raise IncompatibleCheckpointError(
                "feature fingerprint mismatch: checkpoint was trained on "
                f"{self.feature_fingerprint[:12]}..., panel/normalization gives {feature_fp[:12]}...; "
                "rebuild the panel with the training NormStats or retrain"
            )


def _arrays(ckpt: Checkpoint) -> list[tuple[str, np.ndarray]]:
    out = [(_PARAM + k, v) for k, v in ckpt.params.items()]
    if ckpt.optimizer is not None:
        out += [(_M + k, v) for k, v in ckpt.optimizer.m.items()]
        out += [(_V + k, v) for k, v in ckpt.optimizer.v.items()]
    return out


def to_bytes(ckpt: Checkpoint) -> bytes:
    entries, chunks, offset = [], [], 0
    for name, arr in _arrays(ckpt):
        a = np.array(arr, dtype="<f8", order="C")  # keeps 0-d shapes
        entries.append({"name": name, "shape": list(a.shape), "offset": offset, "count": int(a.size)})
        chunks.append(a.tobytes())
        offset += a.nbytes
    data = b"".join(chunks)
    manifest = {
        "format": 1,
        "dtype": "float64-le",
        "arrays": entries,
        "data_bytes": len(data),
        "data_sha256": hashlib.sha256(data).hexdigest(),
        **ckpt.manifest_fields(),
    }
    head = json.dumps(manifest, sort_keys=True, allow_nan=False).encode()
    return MAGIC + struct.pack("<Q", len(head)) + head + data


def from_bytes(blob: bytes) -> Checkpoint:
    if len(blob) < len(MAGIC) + 8 or blob[: len(MAGIC)] != MAGIC:
        raise CheckpointError("not a checkpoint file (bad header)")
    (n,) = struct.unpack("<Q", blob[len(MAGIC): len(MAGIC) + 8])
    start = len(MAGIC) + 8
    if len(blob) < start + n:
        raise CheckpointError("checkpoint truncated inside the manifest")
    try:
        manifest = json.loads(blob[start: start + n].decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"unreadable checkpoint manifest: {exc}") from None
    data = blob[start + n:]
    if len(data) != manifest["data_bytes"]:
        raise CheckpointError(
            f"checkpoint data section has {len(data)} bytes, manifest says {manifest['data_bytes']}"
        )
    if hashlib.sha256(data).hexdigest() != manifest["data_sha256"]:
        raise CheckpointError("checkpoint data checksum mismatch")
    groups: dict[str, dict] = {_PARAM: {}, _M: {}, _V: {}}
    for e in manifest["arrays"]:
        a = np.frombuffer(data, dtype="<f8", count=e["count"], offset=e["offset"])
        arr = a.reshape(e["shape"]).astype(float)
        for prefix, g in groups.items():
            if e["name"].startswith(prefix):
                g[e["name"][len(prefix):]] = arr
    params = from_arrays(groups[_PARAM])
    opt = None
    if manifest.get("adam_step") is not None:
        opt = AdamState(from_arrays(groups[_M]), from_arrays(groups[_V]), int(manifest["adam_step"]))
    return Checkpoint(
        params=params,
        update=manifest["update"],
        valid_sharpe=manifest["valid_sharpe"],
        train_sharpe=manifest["train_sharpe"],
        seed=manifest["seed"],
        env_config=manifest["env_config"],
        train_config=manifest["train_config"],
        feature_fingerprint=manifest["feature_fingerprint"],
        env_fingerprint=manifest["env_fingerprint"],
        optimizer=opt,
        extra=manifest.get("extra", {}),
    )


def atomic_write_bytes(path, blob: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_checkpoint(ckpt: Checkpoint, path) -> None:
    atomic_write_bytes(path, to_bytes(ckpt))


def load_checkpoint(path) -> Checkpoint:
    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from None
    return from_bytes(blob)
