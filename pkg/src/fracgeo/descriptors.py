"""On-disk formats: JSON descriptors for bodies and fields, the voxel
binary with its JSON sidecar, and CSV tables.

Descriptors are small human-writable JSON objects dispatched on a "kind"
key.  Body kinds: ball, ellipsoid, polytope, box.  Field kinds: indicator
(wrapping a body descriptor), radial_profile, voxel.  A voxel descriptor
carries the grid geometry and the name of a flat binary holding the
payload; the binary is self-describing (header: n, box, counts; payload:
64-bit floats, row-major) so it can also be loaded on its own.

All JSON is UTF-8 with sorted keys, all CSV is comma-separated with a
header row and 17-significant-digit floats, and every writer here is
deterministic: equal inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from typing import NamedTuple

import numpy as np

from .bodies import Ball, Ellipsoid, Polytope, RadialTable
from .errors import FormatError
from .fields import IndicatorOfBody, RadialProfile, VoxelGrid

__all__ = [
    "body_to_descriptor",
    "body_from_descriptor",
    "field_to_descriptor",
    "field_from_descriptor",
    "descriptor_digest",
    "load_descriptor",
    "save_voxel",
    "load_voxel",
    "write_json",
    "radial_table_to_csv",
    "radial_profile_to_csv",
    "radial_profile_from_csv",
    "CsvTable",
    "read_csv_table",
]

_FLOAT_FMT = "%.17g"


def _fmt(x: float) -> str:
    return _FLOAT_FMT % float(x)


def _floats(x):
    """Nested lists of Python floats, for stable JSON encoding."""
    arr = np.asarray(x, dtype=float)
    return arr.tolist()


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise FormatError(f"{where}: missing key {key!r}")
    return obj[key]


# ---------------------------------------------------------------------------
# body descriptors


def body_to_descriptor(body) -> dict:
    if isinstance(body, Ball):
        return {"kind": "ball", "n": body.n, "r": float(body.r),
                "center": _floats(body.center_array)}
    if isinstance(body, Ellipsoid):
        return {"kind": "ellipsoid", "A": _floats(body.A),
                "center": _floats(body.center)}
    if isinstance(body, Polytope):
        return {"kind": "polytope", "vertices": _floats(body.vertices)}
    raise FormatError(f"no descriptor form for {type(body).__name__}")


def body_from_descriptor(obj: dict):
    kind = _need(obj, "kind", "body descriptor")
    if kind == "ball":
        n = int(_need(obj, "n", "ball"))
        return Ball(float(_need(obj, "r", "ball")), n=n,
                    center=obj.get("center"))
    if kind == "ellipsoid":
        center = obj.get("center")
        if "A" in obj:
            return Ellipsoid(np.asarray(obj["A"], dtype=float), center=center)
        if "semi_axes" in obj:
            return Ellipsoid.from_semi_axes(obj["semi_axes"], center=center)
        raise FormatError("ellipsoid: needs A or semi_axes")
    if kind == "polytope":
        return Polytope.from_vertices(_need(obj, "vertices", "polytope"))
    if kind == "box":
        return Polytope.box(_need(obj, "lo", "box"), _need(obj, "hi", "box"))
    raise FormatError(f"unknown body kind {kind!r}")


# ---------------------------------------------------------------------------
# field descriptors


def field_to_descriptor(f, voxel_data: str | None = None) -> dict:
    """Descriptor for a field.  A VoxelGrid needs `voxel_data`, the name its
    payload binary is (or will be) stored under; `save_voxel` fills this in
    when writing the pair.
    """
    if isinstance(f, IndicatorOfBody):
        return {"kind": "indicator", "body": body_to_descriptor(f.body),
                "height": float(f.height)}
    if isinstance(f, RadialProfile):
        return {"kind": "radial_profile", "n": f.n,
                "radii": _floats(f.radii), "values": _floats(f.values)}
    if isinstance(f, VoxelGrid):
        if voxel_data is None:
            raise FormatError("voxel descriptor needs the payload file name")
        return {"kind": "voxel", "data": voxel_data, "n": f.n,
                "lo": _floats(f.lo), "hi": _floats(f.hi),
                "counts": [int(c) for c in f.values.shape]}
    raise FormatError(f"no descriptor form for {type(f).__name__}")


def field_from_descriptor(obj: dict, base_dir: str = "."):
    kind = _need(obj, "kind", "field descriptor")
    if kind == "indicator":
        body = body_from_descriptor(_need(obj, "body", "indicator"))
        return IndicatorOfBody(body, height=float(obj.get("height", 1.0)))
    if kind == "radial_profile":
        return RadialProfile(int(_need(obj, "n", "radial_profile")),
                             _need(obj, "radii", "radial_profile"),
                             _need(obj, "values", "radial_profile"))
    if kind == "voxel":
        path = os.path.join(base_dir, _need(obj, "data", "voxel"))
        grid = load_voxel(path)
        for key, got in (("n", grid.n), ("counts", list(grid.values.shape))):
            if key in obj and list(np.atleast_1d(obj[key])) != list(
                    np.atleast_1d(got)):
                raise FormatError(
                    f"voxel sidecar {key}={obj[key]!r} disagrees with the "
                    f"binary header ({got!r})")
        return grid
    raise FormatError(f"unknown field kind {kind!r}")


def descriptor_digest(obj: dict) -> str:
    """sha256 of the canonical JSON encoding, for report digests."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def load_descriptor(path: str):
    """Load a body or field from a descriptor JSON (or a bare voxel .bin).

    Returns whichever object the "kind" denotes; callers that need one or
    the other check the type.
    """
    if path.endswith(".bin"):
        return load_voxel(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(
            f"{path} is not valid JSON (line {exc.lineno}, column "
            f"{exc.colno}): {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: descriptor must be a JSON object")
    kind = _need(obj, "kind", path)
    base = os.path.dirname(os.path.abspath(path))
    if kind in ("ball", "ellipsoid", "polytope", "box"):
        return body_from_descriptor(obj)
    if kind in ("indicator", "radial_profile", "voxel"):
        return field_from_descriptor(obj, base_dir=base)
    raise FormatError(f"{path}: unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# voxel binary + sidecar

_I8 = np.dtype("<i8")
_F8 = np.dtype("<f8")


def save_voxel(grid: VoxelGrid, path: str) -> dict:
    """Write the payload binary at `path` and a JSON sidecar next to it
    (same name, .json extension).  Returns the sidecar descriptor.
    """
    counts = np.asarray(grid.values.shape, dtype=_I8)
    with open(path, "wb") as fh:
        fh.write(np.asarray([grid.n], dtype=_I8).tobytes())
        fh.write(np.asarray(grid.lo, dtype=_F8).tobytes())
        fh.write(np.asarray(grid.hi, dtype=_F8).tobytes())
        fh.write(counts.tobytes())
        fh.write(np.ascontiguousarray(grid.values, dtype=_F8).tobytes())
    desc = field_to_descriptor(grid, voxel_data=os.path.basename(path))
    write_json(desc, os.path.splitext(path)[0] + ".json")
    return desc


def load_voxel(path: str) -> VoxelGrid:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    if len(raw) < _I8.itemsize:
        raise FormatError(f"{path}: truncated voxel header")
    n = int(np.frombuffer(raw, dtype=_I8, count=1)[0])
    if not 1 <= n <= 8:
        raise FormatError(f"{path}: implausible dimension {n} in header")
    off = _I8.itemsize
    header = 2 * n * _F8.itemsize + n * _I8.itemsize
    if len(raw) < off + header:
        raise FormatError(f"{path}: truncated voxel header")
    lo = np.frombuffer(raw, dtype=_F8, count=n, offset=off)
    off += n * _F8.itemsize
    hi = np.frombuffer(raw, dtype=_F8, count=n, offset=off)
    off += n * _F8.itemsize
    counts = np.frombuffer(raw, dtype=_I8, count=n, offset=off)
    off += n * _I8.itemsize
    total = int(np.prod(counts))
    if len(raw) != off + total * _F8.itemsize:
        raise FormatError(
            f"{path}: payload holds {(len(raw) - off) // _F8.itemsize} "
            f"floats, header promises {total}")
    values = np.frombuffer(raw, dtype=_F8, offset=off).reshape(counts)
    return VoxelGrid(lo, hi, values.copy())


# ---------------------------------------------------------------------------
# JSON / CSV writers


def write_json(obj, path: str) -> None:
    blob = json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(blob + "\n")


def radial_table_to_csv(table: RadialTable, path: str,
                        value_name: str = "radius",
                        values=None) -> None:
    """One row per grid node: the node coordinates, then the value.

    By default the value column is the table's radial function; passing
    `values` substitutes another per-node quantity (e.g. a sampled support
    function) under the given column name.
    """
    nodes = table.quadrature.nodes
    vals = table.radii if values is None else np.asarray(values, dtype=float)
    if len(vals) != len(nodes):
        raise FormatError("value column length does not match the grid")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"u_{i + 1}" for i in range(table.n)] + [value_name])
        for u, v in zip(nodes, vals):
            writer.writerow([_fmt(c) for c in u] + [_fmt(v)])


def radial_profile_to_csv(profile: RadialProfile, path: str) -> None:
    """One row per knot: outer radius of the shell, value on the shell."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["radius", "value"])
        for r, v in zip(profile.radii, profile.values):
            writer.writerow([_fmt(r), _fmt(v)])


def radial_profile_from_csv(path: str, n: int) -> RadialProfile:
    table = read_csv_table(path)
    if table.header != ["radius", "value"]:
        raise FormatError(f"{path}: expected header radius,value, got "
                          f"{','.join(table.header)}")
    return RadialProfile(n, table.columns[:, 0], table.columns[:, 1])


class CsvTable(NamedTuple):
    header: list
    columns: np.ndarray  # shape (rows, len(header))


def read_csv_table(path: str) -> CsvTable:
    """Read a numeric CSV with a header row, as written by this module."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise FormatError(f"{path}: empty CSV")
    header, data = rows[0], rows[1:]
    try:
        columns = np.asarray([[float(c) for c in row] for row in data])
    except ValueError as exc:
        raise FormatError(f"{path}: non-numeric cell: {exc}") from exc
    if data and columns.shape[1] != len(header):
        raise FormatError(f"{path}: ragged CSV")
    if not data:
        columns = np.empty((0, len(header)))
    return CsvTable(header, columns)
