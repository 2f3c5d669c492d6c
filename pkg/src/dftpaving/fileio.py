"""Flat-file formats for matrices and witness certificates.

Matrix files are line oriented::

    # format=dftpaving-matrix
    # version=1
    # rows=12
    # cols=6
    # encoding=decimal
    # r=2
    # n=3
    # construction=stack
    0.408248290463863,0.0 0.408248290463863,0.0 ...

Each body line is one matrix row of ``re,im`` pairs. ``decimal`` writes the
shortest repr that round-trips; ``hex`` writes ``float.hex`` strings. Both
reproduce the matrix bit for bit.

Certificates are canonical JSON (sorted keys, two-space indent). Row indices
and block labels in both formats are 1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .construction import FrameParams, build_stack
from .partition import Partition
from .witness import RieszWitness, verify_witness

MATRIX_FORMAT = "dftpaving-matrix"
CERT_FORMAT = "dftpaving-certificate"
FORMAT_VERSION = "1"
_FIXED_KEYS = ("format", "version", "rows", "cols", "encoding")


class FormatError(ValueError):
    pass


@dataclass
class MatrixFile:
    matrix: np.ndarray
    meta: dict[str, str] = field(default_factory=dict)
    encoding: str = "decimal"


def _fmt(x: float, encoding: str) -> str:
    return float.hex(x) if encoding == "hex" else repr(x)


def _parse_float(s: str, encoding: str) -> float:
    return float.fromhex(s) if encoding == "hex" else float(s)


def serialize_matrix(mf: MatrixFile) -> str:
    if mf.encoding not in ("decimal", "hex"):
        raise FormatError(f"unknown encoding {mf.encoding!r}")
    a = np.asarray(mf.matrix, dtype=np.complex128)
    rows, cols = a.shape
    lines = [f"# format={MATRIX_FORMAT}", f"# version={FORMAT_VERSION}",
             f"# rows={rows}", f"# cols={cols}", f"# encoding={mf.encoding}"]
    for key, value in mf.meta.items():
        if key in _FIXED_KEYS or "=" in key or "\n" in str(value):
            raise FormatError(f"invalid metadata entry {key!r}")
        lines.append(f"# {key}={value}")
    enc = mf.encoding
    for row in a:
        lines.append(" ".join(f"{_fmt(float(z.real), enc)},{_fmt(float(z.imag), enc)}" for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> MatrixFile:
    header: dict[str, str] = {}
    body: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if not sep:
                raise FormatError(f"line {lineno}: header line without '='")
            header[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    if header.get("format") != MATRIX_FORMAT:
        raise FormatError(f"not a {MATRIX_FORMAT} file")
    try:
        rows, cols = int(header["rows"]), int(header["cols"])
    except (KeyError, ValueError) as exc:
        raise FormatError("missing or invalid rows/cols header") from exc
    encoding = header.get("encoding", "decimal")
    if len(body) != rows:
        raise FormatError(f"header says {rows} rows, body has {len(body)}")
    a = np.empty((rows, cols), dtype=np.complex128)
    for i, line in enumerate(body):
        entries = line.split()
        if len(entries) != cols:
            raise FormatError(f"row {i + 1}: expected {cols} entries, got {len(entries)}")
        for j, entry in enumerate(entries):
            try:
                re, im = entry.split(",")
                a[i, j] = complex(_parse_float(re, encoding), _parse_float(im, encoding))
            except ValueError as exc:
                raise FormatError(f"row {i + 1}, column {j + 1}: bad entry {entry!r}") from exc
    if not np.all(np.isfinite(a)):
        raise FormatError("matrix contains non-finite entries")
    meta = {k: v for k, v in header.items() if k not in _FIXED_KEYS}
    return MatrixFile(a, meta, encoding)


def read_matrix(path) -> MatrixFile:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def write_matrix(path, mf: MatrixFile) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_matrix(mf))


# --- certificates -----------------------------------------------------------

def certificate_dict(r: int, n: int, p: Partition, w: RieszWitness, verdict: bool, **extra) -> dict:
    cert = {
        "format": CERT_FORMAT,
        "version": int(FORMAT_VERSION),
        "r": r,
        "n": n,
        "k": w.k,
        "j": w.j + 1,
        "partition": [a + 1 for a in p.assignment],
        "support": [i + 1 for i in w.support],
        "coefficients": [[float(c.real), float(c.imag)] for c in w.coefficients],
        "achieved": w.achieved,
        "bound": w.bound,
        "bound_exact": f"{w.bound_exact.numerator}/{w.bound_exact.denominator}",
        "verdict": bool(verdict),
    }
    cert.update(extra)
    return cert


def serialize_certificate(cert: dict) -> str:
    return json.dumps(cert, indent=2, sort_keys=True, allow_nan=False) + "\n"


def parse_certificate(text: str) -> dict:
    try:
        cert = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"certificate is not valid JSON: {exc}") from exc
    if not isinstance(cert, dict) or cert.get("format") != CERT_FORMAT:
        raise FormatError(f"not a {CERT_FORMAT} file")
    missing = {"r", "n", "k", "j", "partition", "support", "coefficients", "achieved",
               "bound", "bound_exact"} - cert.keys()
    if missing:
        raise FormatError(f"certificate lacks fields: {sorted(missing)}")
    return cert


def witness_from_certificate(cert: dict) -> tuple[Partition, RieszWitness]:
    r, k = int(cert["r"]), int(cert["k"])
    p = Partition(r, [int(a) - 1 for a in cert["partition"]])
    coeffs = np.array([complex(re, im) for re, im in cert["coefficients"]], dtype=np.complex128)
    w = RieszWitness(k=k, j=int(cert["j"]) - 1, support=tuple(int(i) - 1 for i in cert["support"]),
                     coefficients=coeffs, achieved=float(cert["achieved"]), bound=float(cert["bound"]),
                     bound_exact=Fraction(cert["bound_exact"]))
    return p, w


def check_certificate(cert: dict) -> tuple[bool, dict]:
    """Re-verify a certificate against a freshly built frame.

    Beyond the witness itself this checks that the recorded bound is the
    frame's ``delta_k`` and that the support is exactly ``A_j & D_k``.
    """
    params = FrameParams(int(cert["r"]), int(cert["n"]))
    frame = build_stack(params)
    p, w = witness_from_certificate(cert)
    if p.size != frame.size:
        return False, {"error": f"partition has {p.size} labels, frame has {frame.size} rows"}
    if not 1 <= w.k <= params.r - 1:
        return False, {"error": f"k={w.k} outside 1..{params.r - 1}"}
    ok, info = verify_witness(frame, w)
    rows = frame.row_blocks[w.k - 1]
    expected_support = tuple(i for i in rows if p.assignment[i] == w.j)
    info["checks"]["support_matches_partition"] = w.support == expected_support
    info["checks"]["bound_is_delta_k"] = (w.bound_exact == frame.deltas_exact[w.k - 1]
                                          and w.bound == frame.deltas[w.k - 1])
    return ok and all(info["checks"].values()), info
