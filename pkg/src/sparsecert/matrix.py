"""Sensing-matrix plumbing: validation, Gram matrix, file I/O and seeded generation.

Matrices are plain ``numpy.ndarray`` objects of dtype float64 and shape (n, m).
Columns are the atoms alpha_1..alpha_m of the sensing matrix.

Random generation uses numpy's ``PCG64`` bit generator (``numpy.random.default_rng``)
and its ziggurat standard-normal transform, so a seed reproduces the same matrix
bit for bit on any platform running the same numpy major version.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import IO, Union

import numpy as np

FORMATS = ("csv", "matrix-market")
GENERATOR_KINDS = ("gaussian", "identity-padded", "custom-kernel")

_MM_HEADER = "%%MatrixMarket matrix array real general"


class MatrixParseError(ValueError):
    """Malformed matrix file (bad header, ragged rows, wrong value count)."""


class MatrixValueError(ValueError):
    """Non-finite entries, or a zero column where one is not allowed."""


class ZeroColumnError(MatrixValueError):
    def __init__(self, index: int):
        super().__init__(f"column {index} is the zero vector")
        self.index = index


def as_matrix(A) -> np.ndarray:
    """Return ``A`` as a read-only 2-D float64 array, rejecting NaN/inf and empty shapes."""
    A = np.array(A, dtype=np.float64)
    if A.ndim != 2:
        raise MatrixValueError(f"expected a 2-D matrix, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise MatrixValueError(f"matrix must have at least one row and column, got {A.shape}")
    if not np.all(np.isfinite(A)):
        raise MatrixValueError("matrix contains NaN or infinite entries")
    A.setflags(write=False)
    return A


def gram(A) -> np.ndarray:
    """Gram matrix C = A^T A.

    Entry (i, j) is accumulated row by row in the fixed order
    ``((a_0i a_0j + a_1i a_1j) + ...)``, i.e. the textbook triple loop, so the
    result is reproducible and exactly symmetric (IEEE products commute).
    """
    A = as_matrix(A)
    n, m = A.shape
    C = np.zeros((m, m))
    for k in range(n):
        row = A[k]
        C += np.multiply.outer(row, row)
    # mirror the upper triangle; a no-op in exact arithmetic, here it pins symmetry
    # even if a BLAS-backed path is ever swapped in above
    iu = np.triu_indices(m, 1)
    C.T[iu] = C[iu]
    C.setflags(write=False)
    return C


def column_norms(A) -> np.ndarray:
    A = as_matrix(A)
    return np.sqrt(np.einsum("ij,ij->j", A, A))


def normalize_columns(A) -> np.ndarray:
    """Scale every column to unit l2 norm. Raises ZeroColumnError on a zero column."""
    A = as_matrix(A)
    norms = column_norms(A)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroColumnError(int(zero[0]))
    return as_matrix(A / norms)


# ---------------------------------------------------------------- file formats


def _format_number(x: float) -> str:
    # 17 significant digits always round-trip a binary64 value
    return format(float(x), ".17g")


def _parse_number(token: str, where: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MatrixParseError(f"{where}: not a number: {token!r}") from None
    if not np.isfinite(value):
        raise MatrixValueError(f"{where}: non-finite value {token!r}")
    return value


def _read_text(source: Union[str, bytes, IO]) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _load_csv(text: str) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        rows.append([_parse_number(tok.strip(), f"line {lineno}") for tok in line.split(",")])
    if not rows:
        raise MatrixParseError("empty CSV input")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise MatrixParseError(
                f"row {i + 1} has {len(row)} entries, expected {width}"
            )
    return as_matrix(rows)


def _load_matrix_market(text: str) -> np.ndarray:
    lines = text.splitlines()
    if not lines:
        raise MatrixParseError("empty Matrix Market input")
    banner = lines[0].split()
    if (
        len(banner) != 5
        or banner[0] != "%%MatrixMarket"
        or [b.lower() for b in banner[1:]] != ["matrix", "array", "real", "general"]
    ):
        raise MatrixParseError(f"unsupported Matrix Market banner: {lines[0]!r}")
    body = [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixParseError("missing size line")
    size = body[0].split()
    if len(size) != 2:
        raise MatrixParseError(f"bad size line: {body[0]!r}")
    try:
        n, m = int(size[0]), int(size[1])
    except ValueError:
        raise MatrixParseError(f"bad size line: {body[0]!r}") from None
    if n < 1 or m < 1:
        raise MatrixParseError(f"bad dimensions {n} x {m}")
    tokens = [tok for ln in body[1:] for tok in ln.split()]
    if len(tokens) != n * m:
        raise MatrixParseError(f"expected {n * m} values, found {len(tokens)}")
    values = [_parse_number(tok, f"value {k + 1}") for k, tok in enumerate(tokens)]
    # array format stores entries column-major
    return as_matrix(np.array(values).reshape((m, n)).T)


def load_matrix(source, format: str = "csv") -> np.ndarray:
    """Read a dense real matrix from text, bytes or a file object."""
    text = _read_text(source)
    if format == "csv":
        return _load_csv(text)
    if format == "matrix-market":
        return _load_matrix_market(text)
    raise ValueError(f"unknown matrix format {format!r}; expected one of {FORMATS}")


def save_matrix(A, format: str = "csv") -> str:
    A = as_matrix(A)
    if format == "csv":
        return "\n".join(",".join(_format_number(x) for x in row) for row in A) + "\n"
    if format == "matrix-market":
        n, m = A.shape
        out = io.StringIO()
        out.write(_MM_HEADER + "\n")
        out.write(f"{n} {m}\n")
        for x in A.T.ravel():
            out.write(_format_number(x) + "\n")
        return out.getvalue()
    raise ValueError(f"unknown matrix format {format!r}; expected one of {FORMATS}")


def format_for_path(path: str) -> str:
    return "matrix-market" if str(path).lower().endswith(".mtx") else "csv"


def read_matrix_file(path, format: str | None = None) -> np.ndarray:
    with open(path, "rb") as fh:
        return load_matrix(fh, format or format_for_path(path))


def write_matrix_file(A, path, format: str | None = None) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(save_matrix(A, format or format_for_path(path)))


# ------------------------------------------------------------------ generation


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for a reproducible test matrix.

    kind
        ``gaussian``: i.i.d. standard normal entries.
        ``identity-padded``: ``[I_n | G]`` with G an n x (m - n) Gaussian block.
        ``custom-kernel``: rows form an orthonormal basis of the orthogonal
        complement of a Gaussian m x (m - n) kernel basis, so the null space is
        exactly that span.
    """

    kind: str
    rows: int
    cols: int
    seed: int = 0
    normalize_columns: bool = False

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"invalid dimensions {self.rows} x {self.cols}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.kind != "gaussian" and self.cols < self.rows:
            raise ValueError(f"{self.kind} needs cols >= rows")


def generate(spec: GeneratorSpec) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n, m = spec.rows, spec.cols
    if spec.kind == "gaussian":
        A = rng.standard_normal((n, m))
    elif spec.kind == "identity-padded":
        A = np.hstack([np.eye(n), rng.standard_normal((n, m - n))])
    else:
        K = rng.standard_normal((m, m - n))
        Q, _ = np.linalg.qr(K, mode="complete")
        A = Q[:, m - n:].T.copy()
    A = as_matrix(A)
    return normalize_columns(A) if spec.normalize_columns else A
