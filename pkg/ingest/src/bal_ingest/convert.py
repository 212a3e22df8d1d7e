"""Convert common array dumps (CSV, .npy, .npz) into FMAT feature files.

The adapter is a format boundary only: it never computes features or scores.
The FMAT layout is written from its published byte spec, little-endian:
magic "FMAT" | version u32 = 1 | flags u32 (bit0 labels) | n_rows u64 |
n_cols u64 | class_count u32 | f32 payload | u32 labels (iff bit0).
"""

import csv
import struct
from pathlib import Path

import numpy as np

_HEADER = struct.Struct("<4sIIQQI")


class IngestError(ValueError):
    pass


def _reject_non_finite(arr: np.ndarray):
    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        r, c = bad[0]
        raise IngestError(f"non-finite value at row {r}, column {c}")


def write_fmat(path, data: np.ndarray, labels=None, class_count: int = 0):
    data = np.ascontiguousarray(data, dtype=np.float32)
    if data.ndim != 2:
        raise IngestError(f"expected a 2-D array, got shape {data.shape}")
    _reject_non_finite(data)
    flags = 0
    label_bytes = b""
    if labels is not None:
        labels = np.ascontiguousarray(labels, dtype=np.uint32)
        if labels.shape != (data.shape[0],):
            raise IngestError("labels length does not match row count")
        if class_count <= 0:
            class_count = int(labels.max()) + 1 if labels.size else 0
        flags = 1
        label_bytes = labels.astype("<u4").tobytes()
    with open(path, "wb") as f:
        f.write(_HEADER.pack(b"FMAT", 1, flags, data.shape[0], data.shape[1],
                             class_count))
        f.write(data.astype("<f4").tobytes())
        f.write(label_bytes)


def _load_csv(path, label_column):
    with open(path, newline="") as f:
        records = [r for r in csv.reader(f) if r]
    if not records:
        raise IngestError(f"{path}: empty file")

    header = None
    try:
        [float(c) for c in records[0]]
    except ValueError:
        header = records[0]
        records = records[1:]
        if not records:
            raise IngestError(f"{path}: header but no data rows")

    label_idx = None
    if label_column is not None:
        if header is not None and label_column in header:
            label_idx = header.index(label_column)
        else:
            try:
                label_idx = int(label_column)
            except ValueError:
                raise IngestError(
                    f"label column {label_column!r} not found in header") from None

    width = len(records[0])
    rows, labels = [], []
    for lineno, rec in enumerate(records, start=1):
        if len(rec) != width:
            raise IngestError(f"{path}: ragged row {lineno}")
        try:
            vals = [float(c) for c in rec]
        except ValueError as e:
            raise IngestError(f"{path}: row {lineno}: {e}") from None
        if label_idx is not None:
            lab = vals.pop(label_idx if label_idx >= 0 else len(vals) + label_idx)
            if lab != int(lab) or lab < 0:
                raise IngestError(f"{path}: row {lineno}: label {lab} is not a "
                                  "nonnegative integer")
            labels.append(int(lab))
        rows.append(vals)
    data = np.asarray(rows, dtype=np.float64)
    return data, (np.asarray(labels, dtype=np.uint32) if label_idx is not None
                  else None)


def _load_array(path):
    arr = np.load(path, allow_pickle=False)
    if isinstance(arr, np.lib.npyio.NpzFile):
        keys = list(arr.keys())
        key = "features" if "features" in keys else keys[0]
        arr = arr[key]
    return np.asarray(arr)


def to_fmat(input_path, output_path, label_column=None):
    """Convert a CSV/.npy/.npz array dump into a validated FMAT file."""
    suffix = Path(input_path).suffix.lower()
    labels = None
    if suffix == ".csv":
        data, labels = _load_csv(input_path, label_column)
    elif suffix in (".npy", ".npz"):
        if label_column is not None:
            raise IngestError("--label-col only applies to CSV input")
        data = _load_array(input_path)
    else:
        raise IngestError(f"unsupported container {suffix!r}")
    if data.ndim != 2:
        raise IngestError(f"expected a 2-D array, got shape {data.shape}")
    if not np.issubdtype(data.dtype, np.number):
        raise IngestError(f"non-numeric array dtype {data.dtype}")
    _reject_non_finite(data.astype(np.float64))
    write_fmat(output_path, data, labels=labels)
