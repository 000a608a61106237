"""PAMF binary field format.

Layout (little-endian): magic ``PAMF``, u32 version = 1, u64 n, f64 L, then
n·n f64 values in row-major order. Directories of fields carry a plain-text
``manifest.txt`` with ``key = value`` lines.
"""

import logging
from pathlib import Path
from typing import Dict, Mapping, Tuple, Union

import numpy as np

from ..exceptions import FieldFormatError
from ..utils import ensure_directory
from .grid import Field, Grid

logger = logging.getLogger(__name__)

MAGIC = b"PAMF"
VERSION = 1
HEADER = np.dtype([("magic", "S4"), ("version", "<u4"), ("n", "<u8"), ("L", "<f8")])
MANIFEST_NAME = "manifest.txt"

PathLike = Union[str, Path]


def encode_field(field: Field) -> bytes:
    """Serialise a field to PAMF bytes."""
    header = np.zeros(1, dtype=HEADER)
    header["magic"] = MAGIC
    header["version"] = VERSION
    header["n"] = field.grid.n
    header["L"] = field.grid.L
    body = np.ascontiguousarray(field.values, dtype="<f8")
    return header.tobytes() + body.tobytes()


def decode_field(payload: bytes, source: str = "<bytes>") -> Field:
    """Parse PAMF bytes, validating magic, version and size.

    Raises:
        FieldFormatError: On any header or size inconsistency.
    """
    if len(payload) < HEADER.itemsize:
        raise FieldFormatError("stream shorter than the PAMF header", path=source)
    header = np.frombuffer(payload[: HEADER.itemsize], dtype=HEADER)[0]
    if bytes(header["magic"]) != MAGIC:
        raise FieldFormatError(f"bad magic {bytes(header['magic'])!r}", path=source)
    if int(header["version"]) != VERSION:
        raise FieldFormatError(
            f"unsupported PAMF version {int(header['version'])}", path=source
        )
    n, L = int(header["n"]), float(header["L"])
    expected = HEADER.itemsize + 8 * n * n
    if len(payload) != expected:
        raise FieldFormatError(
            f"size mismatch: expected {expected} bytes for n={n}, got {len(payload)}",
            path=source,
        )
    values = np.frombuffer(payload[HEADER.itemsize :], dtype="<f8").reshape(n, n)
    try:
        return Field(Grid(L, n), values)
    except Exception as e:
        raise FieldFormatError(f"invalid field payload: {e}", path=source) from e


def write_field(path: PathLike, field: Field) -> Path:
    """Write one field to a PAMF file."""
    target = Path(path)
    ensure_directory(str(target.parent))
    target.write_bytes(encode_field(field))
    logger.debug(f"Wrote PAMF field n={field.grid.n} to {target}")
    return target


def read_field(path: PathLike) -> Field:
    """Read one field from a PAMF file."""
    source = Path(path)
    try:
        payload = source.read_bytes()
    except OSError as e:
        raise FieldFormatError(f"cannot read {source}: {e}", path=str(source)) from e
    return decode_field(payload, source=str(source))


def write_manifest(directory: PathLike, entries: Mapping[str, object]) -> Path:
    """Write ``key = value`` lines in insertion order."""
    target = ensure_directory(str(directory)) / MANIFEST_NAME
    lines = [f"{key} = {value}" for key, value in entries.items()]
    target.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return target


def read_manifest(directory: PathLike) -> Dict[str, str]:
    """Read a manifest written by :func:`write_manifest`."""
    source = Path(directory) / MANIFEST_NAME
    if not source.exists():
        raise FieldFormatError(f"missing manifest in {directory}", path=str(source))
    entries: Dict[str, str] = {}
    for line in source.read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()
    return entries


def write_fields(
    directory: PathLike, fields: Mapping[str, Field], manifest: Mapping[str, object]
) -> Path:
    """Write named fields as ``<name>.pamf`` plus a manifest."""
    root = ensure_directory(str(directory))
    for name, field in fields.items():
        write_field(root / f"{name}.pamf", field)
    write_manifest(root, {**manifest, "fields": ", ".join(fields)})
    return root


def read_fields(directory: PathLike) -> Tuple[Dict[str, Field], Dict[str, str]]:
    """Read the fields and manifest of a directory written by :func:`write_fields`."""
    root = Path(directory)
    manifest = read_manifest(root)
    names = [name.strip() for name in manifest.get("fields", "").split(",") if name.strip()]
    return {name: read_field(root / f"{name}.pamf") for name in names}, manifest
