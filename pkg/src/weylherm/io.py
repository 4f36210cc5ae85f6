"""Snapshot, observable and Wigner file formats.

A field snapshot is a pair ``<stem>.txt`` / ``<stem>.bin``.  The text header
holds ``N``, ``Nx``, ``a``, ``b``, ``hbar`` and ``t`` as ``key = value`` lines;
the binary is ``2 (N + 1) Nx`` little-endian doubles, mode index outer, cell
index inner, real and imaginary parts interleaved.
"""
import csv
import os
from dataclasses import dataclass

import numpy as np

OBSERVABLE_COLUMNS = ("t", "norm", "trace", "kinetic_energy", "d2", "d4")
_HEADER_KEYS = ("N", "Nx", "a", "b", "hbar", "t")


@dataclass(frozen=True)
class Snapshot:
    field: np.ndarray
    a: float
    b: float
    hbar: float
    t: float


def snapshot_stem(out_dir, t):
    return os.path.join(out_dir, f"field_t{t:012.6f}")


def write_snapshot(stem, field, a, b, hbar, t):
    field = np.ascontiguousarray(field, dtype=np.complex128)
    n_modes, nx = field.shape
    with open(stem + ".txt", "w") as fh:
        for key, val in zip(_HEADER_KEYS, (n_modes - 1, nx, a, b, hbar, t)):
            fh.write(f"{key} = {val!r}\n")
    field.astype("<c16").tofile(stem + ".bin")
    return stem + ".txt", stem + ".bin"


def read_snapshot(stem):
    if stem.endswith((".txt", ".bin")):
        stem = stem[:-4]
    header = {}
    with open(stem + ".txt") as fh:
        for no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            key, sep, val = line.partition("=")
            if not sep or key.strip() not in _HEADER_KEYS:
                raise ValueError(f"{stem}.txt line {no}: malformed header line")
            header[key.strip()] = val.strip()
    missing = [k for k in _HEADER_KEYS if k not in header]
    if missing:
        raise ValueError(f"{stem}.txt: missing header keys {missing}")
    n, nx = int(header["N"]), int(header["Nx"])
    data = np.fromfile(stem + ".bin", dtype="<c16")
    if data.size != (n + 1) * nx:
        raise ValueError(f"{stem}.bin: expected {(n + 1) * nx} entries, found {data.size}")
    return Snapshot(data.reshape(n + 1, nx).astype(np.complex128),
                    float(header["a"]), float(header["b"]),
                    float(header["hbar"]), float(header["t"]))


class ObservableWriter:
    """Streams observable records to CSV, flushing after each row."""

    def __init__(self, path):
        self._fh = open(path, "w", newline="")
        self._w = csv.writer(self._fh)
        self._w.writerow(OBSERVABLE_COLUMNS)
        self._fh.flush()

    def __call__(self, record):
        self._w.writerow([repr(float(record[c])) for c in OBSERVABLE_COLUMNS])
        self._fh.flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_observables(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != OBSERVABLE_COLUMNS:
        raise ValueError(f"{path}: unexpected header")
    data = np.array([[float(v) for v in r] for r in rows[1:]]).reshape(-1, len(OBSERVABLE_COLUMNS))
    return {c: data[:, i] for i, c in enumerate(OBSERVABLE_COLUMNS)}


def write_wigner_csv(path, wf):
    """Rows are cells, columns are ``xi`` nodes; the first row and column hold the axes."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x\\xi"] + [repr(float(v)) for v in wf.xi])
        for xv, row in zip(wf.x, wf.W):
            w.writerow([repr(float(xv))] + [repr(float(v)) for v in row])


def read_wigner_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    xi = np.array([float(v) for v in rows[0][1:]])
    x = np.array([float(r[0]) for r in rows[1:]])
    W = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return x, xi, W
