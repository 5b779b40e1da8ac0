"""Grid files and flat configuration files.

Two grid formats are supported:

* text: ``# key=value`` header lines, a column line ``x,k,re,im`` (the axis
  names may differ) and one row per grid point, x-major;
* binary: little-endian ``b"XWIG1"``, ``u32 nx``, ``u32 nk``, ``f64`` axes,
  then ``f64`` interleaved real/imaginary values, x-major.

Neither format contains timestamps, so equal inputs give equal bytes.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .crosswigner import PhaseSpaceField
from .errors import ConfigError, GridIOError

__all__ = [
    "MAGIC",
    "write_grid_csv",
    "read_grid_csv",
    "write_grid_bin",
    "read_grid_bin",
    "write_field",
    "read_field",
    "write_table",
    "read_config_file",
]

MAGIC = b"XWIG1"
_HEAD = struct.Struct("<5sII")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+.17g}j"
    return str(v).replace("\n", " ")


def _open(path, mode):
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        return open(path, mode)
    except OSError as exc:
        raise GridIOError(f"{path}: {exc.strerror or exc}") from exc


def write_grid_csv(path, axis0, axis1, values, meta=None, names=("x", "k")):
    """Write a complex grid as text; floats are printed with 17 significant digits."""
    a0 = np.asarray(axis0, dtype=float)
    a1 = np.asarray(axis1, dtype=float)
    v = np.asarray(values, dtype=complex)
    if v.shape != (a0.size, a1.size):
        raise ConfigError("values do not match axes", "values")
    head = {"format": "xwigner-grid", "version": 1, f"n{names[0]}": a0.size,
            f"n{names[1]}": a1.size, "axes": ",".join(names)}
    head.update(meta or {})
    g0, g1 = np.meshgrid(a0, a1, indexing="ij")
    cols = np.column_stack([g0.ravel(), g1.ravel(), v.real.ravel(), v.imag.ravel()])
    with _open(path, "w") as fh:
        try:
            for key in head:
                fh.write(f"# {key}={_fmt(head[key])}\n")
            fh.write(f"{names[0]},{names[1]},re,im\n")
            np.savetxt(fh, cols, fmt="%.17g", delimiter=",")
        except OSError as exc:
            raise GridIOError(f"{path}: {exc}") from exc


def read_grid_csv(path):
    """Return ``(axis0, axis1, values, meta)`` from a text grid."""
    meta = {}
    try:
        with open(path) as fh:
            line = fh.readline()
            while line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                meta[key.strip()] = val
                line = fh.readline()
            names = line.strip().split(",")[:2]
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except OSError as exc:
        raise GridIOError(f"{path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise GridIOError(f"{path}: malformed grid file ({exc})") from exc
    try:
        n0 = int(meta[f"n{names[0]}"])
        n1 = int(meta[f"n{names[1]}"])
    except (KeyError, ValueError) as exc:
        raise GridIOError(f"{path}: missing grid size header") from exc
    if data.shape != (n0 * n1, 4):
        raise GridIOError(f"{path}: expected {n0 * n1} rows, found {data.shape[0]}")
    a0 = data[::n1, 0].copy()
    a1 = data[:n1, 1].copy()
    values = np.empty(n0 * n1, dtype=complex)
    values.real, values.imag = data[:, 2], data[:, 3]
    values = values.reshape(n0, n1)
    return a0, a1, values, meta


def write_grid_bin(path, axis0, axis1, values):
    a0 = np.ascontiguousarray(axis0, dtype="<f8")
    a1 = np.ascontiguousarray(axis1, dtype="<f8")
    v = np.asarray(values, dtype=complex)
    if v.shape != (a0.size, a1.size):
        raise ConfigError("values do not match axes", "values")
    inter = np.empty(v.shape + (2,), dtype="<f8")
    inter[..., 0] = v.real
    inter[..., 1] = v.imag
    with _open(path, "wb") as fh:
        try:
            fh.write(_HEAD.pack(MAGIC, a0.size, a1.size))
            fh.write(a0.tobytes())
            fh.write(a1.tobytes())
            fh.write(inter.tobytes())
        except OSError as exc:
            raise GridIOError(f"{path}: {exc}") from exc


def read_grid_bin(path):
    """Return ``(axis0, axis1, values)`` from a binary grid."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise GridIOError(f"{path}: {exc.strerror or exc}") from exc
    if len(raw) < _HEAD.size:
        raise GridIOError(f"{path}: truncated header")
    magic, n0, n1 = _HEAD.unpack_from(raw)
    if magic != MAGIC:
        raise GridIOError(f"{path}: bad magic {magic!r}")
    need = _HEAD.size + 8 * (n0 + n1 + 2 * n0 * n1)
    if len(raw) != need:
        raise GridIOError(f"{path}: expected {need} bytes, found {len(raw)}")
    off = _HEAD.size
    a0 = np.frombuffer(raw, "<f8", n0, off).astype(float)
    off += 8 * n0
    a1 = np.frombuffer(raw, "<f8", n1, off).astype(float)
    off += 8 * n1
    # interleaved float64 pairs are exactly the complex128 layout
    values = np.frombuffer(raw, "<c16", n0 * n1, off).reshape(n0, n1).astype(complex)
    return a0, a1, values


def write_field(path, f: PhaseSpaceField, fmt: str = "csv", meta=None):
    """Write a field; ``fmt`` is ``csv`` or ``bin``."""
    if fmt == "csv":
        head = {"provenance": f.provenance, "units": "x[m],k[1/m]"}
        head.update(f.meta)
        head.update(meta or {})
        write_grid_csv(path, f.x_axis, f.k_axis, f.values, head)
    elif fmt == "bin":
        write_grid_bin(path, f.x_axis, f.k_axis, f.values)
    else:
        raise ConfigError(f"unknown format {fmt!r}", "format")


def read_field(path, fmt: str | None = None, provenance: str = "analytic") -> PhaseSpaceField:
    """Read a field written by ``write_field``; the format follows the suffix by default."""
    fmt = fmt or ("bin" if str(path).endswith(".bin") else "csv")
    if fmt == "bin":
        a0, a1, v = read_grid_bin(path)
        return PhaseSpaceField(a0, a1, v, provenance)
    a0, a1, v, meta = read_grid_csv(path)
    return PhaseSpaceField(a0, a1, v, meta.pop("provenance", provenance), meta)


def write_table(path, columns: dict, meta=None):
    """Write equal-length 1-D columns as CSV with a ``# key=value`` header."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
    with _open(path, "w") as fh:
        for key, val in (meta or {}).items():
            fh.write(f"# {key}={_fmt(val)}\n")
        fh.write(",".join(names) + "\n")
        np.savetxt(fh, data, fmt="%.17g", delimiter=",")


def read_config_file(path) -> dict:
    """Parse a flat ``key=value`` file. Blank lines and ``#`` comments are skipped."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GridIOError(f"{path}: {exc.strerror or exc}") from exc
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{os.fspath(path)}:{n}: expected key=value", "config")
        out[key.strip().replace("_", "-")] = val.strip()
    return out
