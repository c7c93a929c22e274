"""JSON and CSV helpers shared by every module that reads or writes files.

All floats are written with a fixed 17-significant-digit format, so reading a file back
reproduces the binary value exactly and identical runs produce byte-identical files.
"""

import csv
import io
import json
import math
from json import JSONDecodeError
from pathlib import Path
from typing import Any, Union

import numpy as np

from src.shared.exceptions import SerializationException

FLOAT_FORMAT = ".17g"


def format_float(value: float) -> str:
    """Format a float with 17 significant digits.

    Args:
        value: Finite float

    Returns:
        Decimal representation that round-trips exactly

    Raises:
        SerializationException: If the value is NaN or infinite
    """
    value = float(value)
    if not math.isfinite(value):
        raise SerializationException(
            f"Cannot serialize non-finite number: {value}",
            code="IO001",
            context={"value": repr(value)},
        )
    return format(value, FLOAT_FORMAT)


def _encode(obj: Any, indent: int, level: int) -> str:
    """Recursively encode a JSON-compatible object with fixed float formatting."""
    pad = " " * (indent * (level + 1))
    closing_pad = " " * (indent * level)

    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(key), ensure_ascii=False)}: {_encode(value, indent, level + 1)}"
            for key, value in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + closing_pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        values = list(obj)
        if not values:
            return "[]"
        # Flat numeric rows stay on one line
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in values):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in values) + "]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in values]
        return "[\n" + ",\n".join(items) + "\n" + closing_pad + "]"

    raise SerializationException(
        f"Unsupported type for JSON output: {type(obj).__name__}",
        code="IO002",
        context={"type": type(obj).__name__},
    )


def dumps(obj: Any, indent: int = 2) -> str:
    """Serialize an object to deterministic JSON text.

    Args:
        obj: Nested dicts, lists, strings, ints, floats, bools, None or numpy arrays
        indent: Spaces per nesting level

    Returns:
        JSON text terminated by a newline

    Example:
        >>> dumps({"x": 0.1})
        '{\\n  "x": 0.10000000000000001\\n}\\n'
    """
    return _encode(obj, indent, 0) + "\n"


def write_json(path: Union[str, Path], obj: Any) -> Path:
    """Write an object as deterministic JSON.

    Args:
        path: Output file path; parent directories are created
        obj: JSON-compatible object

    Returns:
        The written path

    Raises:
        SerializationException: If the file cannot be written
    """
    path = Path(path)
    text = dumps(obj)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise SerializationException(
            f"Failed to write {path}: {e}",
            code="IO003",
            context={"path": str(path), "error": str(e)},
        ) from e
    return path


def read_json(path: Union[str, Path]) -> Any:
    """Read a JSON file.

    Args:
        path: Input file path

    Returns:
        Parsed JSON content

    Raises:
        SerializationException: If the file is missing, unreadable or malformed
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SerializationException(
            f"Failed to read {path}: {e}",
            code="IO004",
            context={"path": str(path), "error": str(e)},
        ) from e
    try:
        return json.loads(text)
    except JSONDecodeError as e:
        raise SerializationException(
            f"Malformed JSON in {path}: {e}",
            code="IO005",
            context={"path": str(path), "error": str(e)},
        ) from e


def write_csv(path: Union[str, Path], header: list[str], rows: list[list[Any]]) -> Path:
    """Write rows to CSV with fixed float formatting.

    Args:
        path: Output file path
        header: Column names
        rows: Row values; floats are formatted with 17 significant digits

    Returns:
        The written path

    Raises:
        SerializationException: If the file cannot be written
    """
    path = Path(path)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [format_float(v) if isinstance(v, (float, np.floating)) else v for v in row]
        )
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(buffer.getvalue(), encoding="utf-8")
    except OSError as e:
        raise SerializationException(
            f"Failed to write {path}: {e}",
            code="IO003",
            context={"path": str(path), "error": str(e)},
        ) from e
    return path


def matrix_to_json(mat: np.ndarray) -> dict[str, Any]:
    """Encode a square complex matrix as Matrix JSON.

    Args:
        mat: Square matrix

    Returns:
        Dict with "dim" and row-major nested "re" and "im" arrays
    """
    mat = np.asarray(mat, dtype=complex)
    return {
        "dim": int(mat.shape[0]),
        "re": [[float(x) for x in row] for row in mat.real],
        "im": [[float(x) for x in row] for row in mat.imag],
    }


def matrix_from_json(obj: Any) -> np.ndarray:
    """Decode Matrix JSON into a complex array.

    Args:
        obj: Dict with "dim", "re" and optional "im"

    Returns:
        Complex ``dim x dim`` array

    Raises:
        SerializationException: If fields are missing or have the wrong shape
    """
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise SerializationException(
            f"Invalid matrix JSON: {e}",
            code="IO006",
            context={"error": str(e)},
        ) from e
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise SerializationException(
            f"Matrix JSON shape mismatch: dim={dim}, re{re.shape}, im{im.shape}",
            code="IO007",
            context={"dim": dim, "re_shape": list(re.shape), "im_shape": list(im.shape)},
        )
    return re + 1j * im


def vector_to_json(vec: np.ndarray) -> dict[str, Any]:
    """Encode a complex vector as state-vector JSON."""
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    return {
        "dim": int(vec.size),
        "re": [float(x) for x in vec.real],
        "im": [float(x) for x in vec.imag],
    }


def vector_from_json(obj: Any) -> np.ndarray:
    """Decode state-vector JSON into a complex array.

    Raises:
        SerializationException: If fields are missing or have the wrong length
    """
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise SerializationException(
            f"Invalid vector JSON: {e}",
            code="IO006",
            context={"error": str(e)},
        ) from e
    if re.shape != (dim,) or im.shape != (dim,):
        raise SerializationException(
            f"Vector JSON shape mismatch: dim={dim}, re{re.shape}, im{im.shape}",
            code="IO007",
            context={"dim": dim},
        )
    return re + 1j * im
