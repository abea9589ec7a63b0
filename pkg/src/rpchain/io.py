"""Text file formats and deterministic report serialization.

Operator files carry one term per line, ``coeff_re coeff_im site:LETTER ...``;
blank lines and ``#`` comments are ignored.  Vector files start with a header
line ``dim`` followed by ``re im`` per amplitude; density files start with
``dim dim`` followed by row-major ``re im`` entries.
"""

from __future__ import annotations

import csv
import json
import math
import re
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .chain import ChainFrame, DenseOperator, PauliString, Subsystem, assemble, term
from .config import DimensionError

SCHEMA_VERSION = 1
PathLike = Union[str, Path]

_FLOAT_TOKEN = re.compile(r'"\\u0000([^"\\]*)\\u0000"')


class FormatError(DimensionError):
    """A malformed input file."""


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_operator_text(text: str) -> list[PauliString]:
    terms = []
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) < 2:
            raise FormatError(f"line {lineno}: expected 'coeff_re coeff_im site:LETTER ...'")
        try:
            coeff = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise FormatError(f"line {lineno}: bad coefficient ({exc})") from None
        letters = {}
        for tok in parts[2:]:
            site, sep, letter = tok.partition(":")
            if not sep or not site.isdigit() or not letter:
                raise FormatError(f"line {lineno}: bad factor {tok!r}")
            if int(site) in letters:
                raise FormatError(f"line {lineno}: site {site} repeated")
            letters[int(site)] = letter
        terms.append(term(coeff, letters))
    return terms


def read_operator(path: PathLike, frame: ChainFrame, subsystem: Subsystem = "full") -> DenseOperator:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return assemble(parse_operator_text(text), frame, subsystem)
    except DimensionError as exc:
        raise FormatError(f"{path}: {exc}") from None


def _read_numbers(path: PathLike) -> tuple[list[int], np.ndarray]:
    lines = list(_content_lines(Path(path).read_text(encoding="utf-8")))
    if not lines:
        raise FormatError(f"{path}: empty file")
    try:
        header = [int(x) for x in lines[0][1].split()]
        rows = [[float(x) for x in line.split()] for _, line in lines[1:]]
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
    if any(len(r) != 2 for r in rows):
        raise FormatError(f"{path}: every entry line must hold 're im'")
    arr = np.array(rows, dtype=float).reshape(-1, 2)
    return header, arr[:, 0] + 1j * arr[:, 1]


def read_array(path: PathLike) -> np.ndarray:
    """A vector (header ``dim``) or a square matrix (header ``dim dim``)."""
    header, values = _read_numbers(path)
    if len(header) == 1:
        shape = (header[0],)
    elif len(header) == 2 and header[0] == header[1]:
        shape = (header[0], header[1])
    else:
        raise FormatError(f"{path}: header must be 'dim' or 'dim dim', got {header}")
    if values.size != int(np.prod(shape)):
        raise FormatError(f"{path}: expected {int(np.prod(shape))} entries, found {values.size}")
    return values.reshape(shape)


def write_array(path: PathLike, arr: np.ndarray) -> None:
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim not in (1, 2):
        raise DimensionError("only vectors and matrices can be written")
    lines = [" ".join(str(n) for n in arr.shape)]
    lines += [f"{z.real:.17g} {z.imag:.17g}" for z in arr.ravel()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_complex_csv(path: PathLike, mat: np.ndarray) -> None:
    """Matrix as CSV with each entry written as two columns ``re, im``."""
    mat = np.atleast_2d(np.asarray(mat, dtype=complex))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for row in mat:
            writer.writerow([f"{x:.17g}" for z in row for x in (z.real, z.imag)])


def _prepare(obj):
    if isinstance(obj, dict):
        return {str(k): _prepare(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_prepare(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _prepare(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return "\0" + format(x, ".17g") + "\0"
    if isinstance(obj, (complex, np.complexfloating)):
        return _prepare([obj.real, obj.imag])
    return obj


def dumps_report(report: dict) -> str:
    """JSON with a schema field, sorted keys and 17-significant-digit floats."""
    body = {"schema": SCHEMA_VERSION, **report}
    text = json.dumps(_prepare(body), indent=2, sort_keys=True)
    return _FLOAT_TOKEN.sub(lambda m: m.group(1), text) + "\n"
