"""Feature-matrix data model and on-disk formats (FMAT binary, CSV, manifests)."""

import csv
import json
import struct
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

FMAT_MAGIC = b"FMAT"
FMAT_VERSION = 1
_HEADER = struct.Struct("<4sIIQQI")  # magic, version, flags, n_rows, n_cols, class_count


class FormatError(ValueError):
    """Malformed or invalid on-disk data."""


class BadMagicError(FormatError):
    pass


class TruncatedError(FormatError):
    pass


class NonFiniteError(FormatError):
    pass


class LabelMismatchError(FormatError):
    pass


@dataclass(frozen=True)
class FeatureMatrix:
    """Dense N x D float32 feature pool, optionally with per-row class labels."""

    data: np.ndarray                       # (n_rows, n_cols) float32
    labels: Optional[np.ndarray] = None    # (n_rows,) uint32 or None
    class_count: Optional[int] = None

    def __post_init__(self):
        data = np.ascontiguousarray(self.data, dtype=np.float32)
        if data.ndim != 2:
            raise FormatError(f"feature data must be 2-D, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise NonFiniteError("feature data contains NaN/Inf")
        object.__setattr__(self, "data", data)
        if self.labels is not None:
            labels = np.ascontiguousarray(self.labels, dtype=np.uint32)
            if labels.shape != (data.shape[0],):
                raise LabelMismatchError(
                    f"labels length {labels.shape} does not match {data.shape[0]} rows")
            if self.class_count is None:
                raise LabelMismatchError("labels present but class_count missing")
            if labels.size and labels.max() >= self.class_count:
                raise LabelMismatchError(
                    f"label {labels.max()} out of range for class_count={self.class_count}")
            object.__setattr__(self, "labels", labels)

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]

    @property
    def n_cols(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other):
        if not isinstance(other, FeatureMatrix):
            return NotImplemented
        if self.data.shape != other.data.shape:
            return False
        if not np.array_equal(self.data, other.data):
            return False
        if (self.labels is None) != (other.labels is None):
            return False
        if self.labels is not None and not np.array_equal(self.labels, other.labels):
            return False
        return self.class_count == other.class_count


@dataclass
class SelectionManifest:
    """Record of one selection cycle: which rows were labeled and from which window."""

    cycle: int
    beta: float
    subpool_start: int
    subpool_end: int
    selected: list = field(default_factory=list)
    scores: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({
            "cycle": self.cycle,
            "beta": self.beta,
            "subpool_start": self.subpool_start,
            "subpool_end": self.subpool_end,
            "selected": [int(i) for i in self.selected],
            "scores": [float(s) for s in self.scores],
        })

    @classmethod
    def from_json(cls, line: str) -> "SelectionManifest":
        d = json.loads(line)
        return cls(cycle=int(d["cycle"]), beta=float(d["beta"]),
                   subpool_start=int(d["subpool_start"]), subpool_end=int(d["subpool_end"]),
                   selected=[int(i) for i in d["selected"]],
                   scores=[float(s) for s in d["scores"]])


def write_fmat(m: FeatureMatrix, path) -> None:
    """Write the FMAT binary layout; read_fmat(write_fmat(m)) is bit-exact."""
    flags = 1 if m.labels is not None else 0
    class_count = m.class_count if m.class_count is not None else 0
    header = _HEADER.pack(FMAT_MAGIC, FMAT_VERSION, flags,
                          m.n_rows, m.n_cols, class_count)
    with open(path, "wb") as f:
        f.write(header)
        f.write(m.data.astype("<f4", copy=False).tobytes())
        if m.labels is not None:
            f.write(m.labels.astype("<u4", copy=False).tobytes())


def read_fmat(path) -> FeatureMatrix:
    """Read and validate an FMAT file."""
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < _HEADER.size:
        raise TruncatedError(f"{path}: file shorter than header")
    magic, version, flags, n_rows, n_cols, class_count = _HEADER.unpack_from(raw)
    if magic != FMAT_MAGIC:
        raise BadMagicError(f"{path}: bad magic {magic!r}")
    if version != FMAT_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    has_labels = bool(flags & 1)
    payload_bytes = 4 * n_rows * n_cols
    label_bytes = 4 * n_rows if has_labels else 0
    expected = _HEADER.size + payload_bytes + label_bytes
    if len(raw) != expected:
        raise TruncatedError(
            f"{path}: expected {expected} bytes, found {len(raw)}")
    data = np.frombuffer(raw, dtype="<f4", count=n_rows * n_cols,
                         offset=_HEADER.size).reshape(n_rows, n_cols)
    labels = None
    if has_labels:
        labels = np.frombuffer(raw, dtype="<u4", count=n_rows,
                               offset=_HEADER.size + payload_bytes)
    return FeatureMatrix(data=data.copy(),
                         labels=labels.copy() if labels is not None else None,
                         class_count=class_count if (has_labels or class_count) else None)


def read_csv(path, has_label_column: bool = False) -> FeatureMatrix:
    """Parse a rectangular numeric CSV, optionally with a final integer label column."""
    rows = []
    labels = []
    with open(path, newline="") as f:
        width = None
        for lineno, record in enumerate(csv.reader(f), start=1):
            if not record:
                continue
            if width is None:
                width = len(record)
            elif len(record) != width:
                raise FormatError(f"{path}:{lineno}: ragged row "
                                  f"({len(record)} cells, expected {width})")
            try:
                values = [float(c) for c in record]
            except ValueError as e:
                raise FormatError(f"{path}:{lineno}: non-numeric cell ({e})") from None
            if has_label_column:
                lab = values[-1]
                if lab != int(lab) or lab < 0:
                    raise FormatError(f"{path}:{lineno}: label {lab} is not a "
                                      "nonnegative integer")
                labels.append(int(lab))
                values = values[:-1]
            rows.append(values)
    if width is None:
        raise FormatError(f"{path}: empty file")
    data = np.asarray(rows, dtype=np.float32)
    if has_label_column:
        return FeatureMatrix(data=data, labels=np.asarray(labels, dtype=np.uint32),
                             class_count=max(labels) + 1 if labels else 0)
    return FeatureMatrix(data=data)


def write_manifest(manifests, path) -> None:
    """Write selection manifests as JSON lines."""
    with open(path, "w") as f:
        for m in manifests:
            f.write(m.to_json())
            f.write("\n")


def read_manifest(path):
    """Read a JSON-lines manifest file back into SelectionManifest values."""
    out = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                out.append(SelectionManifest.from_json(line))
    return out
