"""Text formats: the operator matrix file and the CSV tables written by the CLI."""

from __future__ import annotations

import io
import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .validation import DimensionError, check_operator


def format_float(x: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return f"{float(x):.17g}"


def dumps_matrix(A) -> str:
    """Serialize an operator: a line with ``D``, then ``D`` rows of ``re im`` pairs."""
    A = check_operator(A)
    lines = [str(A.shape[0])]
    for row in A:
        lines.append(" ".join(f"{format_float(z.real)} {format_float(z.imag)}" for z in row))
    return "\n".join(lines) + "\n"


def loads_matrix(text: str) -> np.ndarray:
    tokens = text.split()
    if not tokens:
        raise DimensionError("empty matrix file")
    try:
        dim = int(tokens[0])
    except ValueError as exc:
        raise DimensionError(f"first token must be the dimension, got {tokens[0]!r}") from exc
    values = tokens[1:]
    if dim < 2 or len(values) != 2 * dim * dim:
        raise DimensionError(f"expected {2 * dim * dim} numbers for D={dim}, found {len(values)}")
    rows = text.strip().splitlines()[1:]
    if len(rows) != dim or any(len(r.split()) != 2 * dim for r in rows):
        raise DimensionError(f"expected {dim} lines of {2 * dim} numbers")
    pairs = np.array([float(v) for v in values]).reshape(dim, dim, 2)
    return pairs[..., 0] + 1j * pairs[..., 1]


def write_matrix(path: str | os.PathLike, A) -> None:
    Path(path).write_text(dumps_matrix(A))


def read_matrix(path: str | os.PathLike) -> np.ndarray:
    return loads_matrix(Path(path).read_text())


def dumps_csv(header: Sequence[str], rows: Iterable[Sequence], comments: Sequence[str] = ()) -> str:
    """CSV text with ``#`` comment lines first; floats use :func:`format_float`."""
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_cell(v) for v in row) + "\n")
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def write_text_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary sibling so a failure never leaves a partial file."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)
