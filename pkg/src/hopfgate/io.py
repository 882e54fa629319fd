"""Matrix files, report serialization and DOT export.

A matrix file is JSON: either a list of rows, or an object with an
``entries`` list of rows and optional ``rows``/``cols`` checks.  Entries
are numbers, decimal or ``"p/q"`` strings (a numeric matrix), or the sign
symbols ``"+"``, ``"-"``, ``"0"`` (a sign pattern).  One file holds one
kind only.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
from fractions import Fraction
from pathlib import Path

from . import __version__
from .dsr import DsrGraph, Orientation, label_str
from .linalg import DimensionError, RationalMatrix, SignPattern, as_rational

__all__ = [
    "MatrixFormatError",
    "parse_matrix",
    "load_matrix",
    "matrix_to_json",
    "dump_matrix",
    "digest",
    "SCHEMA_VERSION",
    "build_report",
    "dump_report",
    "to_dot",
]

SCHEMA_VERSION = "1"
SIGN_SYMBOLS = {"+": 1, "-": -1, "−": -1}
VOLATILE_KEYS = frozenset({"timestamp", "wall_time"})


class MatrixFormatError(ValueError):
    """Malformed or inhomogeneous matrix input."""


def _is_sign_symbol(x) -> bool:
    return isinstance(x, str) and x.strip() in SIGN_SYMBOLS


def _is_zero_token(x) -> bool:
    if isinstance(x, str):
        return x.strip() == "0"
    return not isinstance(x, bool) and isinstance(x, (int, Fraction)) and x == 0


def parse_matrix(data) -> RationalMatrix | SignPattern:
    """Build a matrix or sign pattern from decoded JSON."""
    if isinstance(data, dict):
        if "entries" not in data:
            raise MatrixFormatError("matrix object needs an 'entries' field")
        rows = data["entries"]
        want = (data.get("rows"), data.get("cols"))
    else:
        rows, want = data, (None, None)
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MatrixFormatError("entries must be a list of rows")
    if rows and len({len(r) for r in rows}) != 1:
        raise MatrixFormatError("rows have different lengths")
    n, m = len(rows), len(rows[0]) if rows else 0
    if (want[0] is not None and want[0] != n) or (want[1] is not None and want[1] != m):
        raise MatrixFormatError(f"declared shape {want} does not match entries ({n}, {m})")
    flat = [x for r in rows for x in r]
    signs = [_is_sign_symbol(x) for x in flat]
    if any(signs):
        bad = [x for x, s in zip(flat, signs) if not s and not _is_zero_token(x)]
        if bad:
            raise MatrixFormatError(f"sign pattern mixes in numeric entry {bad[0]!r}")
        return SignPattern.from_flat(
            n, m, [SIGN_SYMBOLS[x.strip()] if s else 0 for x, s in zip(flat, signs)]
        )
    try:
        vals = [_parse_number(x) for x in flat]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise MatrixFormatError(str(exc)) from None
    return RationalMatrix.from_flat(n, m, vals)


def _parse_number(x) -> Fraction:
    if isinstance(x, bool) or x is None:
        raise MatrixFormatError(f"invalid entry {x!r}")
    return as_rational(x)


def load_matrix(path: str | Path) -> RationalMatrix | SignPattern:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: {exc}") from None
    return parse_matrix(data)


def matrix_to_json(M: RationalMatrix | SignPattern) -> dict:
    if isinstance(M, SignPattern):
        sym = {1: "+", -1: "-", 0: "0"}
        entries = [[sym[s] for s in M.row(i)] for i in range(M.rows)]
        kind = "sign"
    else:
        entries = [[str(x) for x in row] for row in M.tolist()]
        kind = "numeric"
    return {"kind": kind, "rows": M.rows, "cols": M.cols, "entries": entries}


def dump_matrix(M: RationalMatrix | SignPattern) -> str:
    return json.dumps(matrix_to_json(M), sort_keys=True) + "\n"


def digest(M: RationalMatrix | SignPattern) -> str:
    """sha256 of the canonical serialization."""
    return hashlib.sha256(dump_matrix(M).encode("utf-8")).hexdigest()


# --- reports ------------------------------------------------------------------

def _strip_volatile(obj):
    if isinstance(obj, dict):
        return {k: _strip_volatile(v) for k, v in obj.items() if k not in VOLATILE_KEYS}
    if isinstance(obj, list):
        return [_strip_volatile(v) for v in obj]
    return obj


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float) and obj != obj:
        return None
    return obj


def build_report(
    body: dict,
    inputs: dict[str, RationalMatrix | SignPattern],
    seed: int | None,
    deterministic: bool = False,
) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "hopfgate", "version": __version__},
        "seed": seed,
        "inputs": {
            k: {"kind": matrix_to_json(M)["kind"], "shape": list(M.shape), "sha256": digest(M)}
            for k, M in inputs.items()
        },
        **body,
    }
    if deterministic:
        return _strip_volatile(_jsonable(report))
    report["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    return _jsonable(report)


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# --- DOT ----------------------------------------------------------------------

def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(G: DsrGraph, name: str = "dsr") -> str:
    """S-vertices as ellipses, R-vertices as boxes, negative edges dashed,
    undirected edges without arrowheads."""
    lines = [f"digraph {_quote(name)} {{"]
    for v in range(G.n_vertices):
        shape = "ellipse" if G.is_s(v) else "box"
        lines.append(f"  {_quote(G.name(v))} [shape={shape}];")
    for e in G.edges:
        s, r = _quote(G.name(G.s_vertex(e.s))), _quote(G.name(G.r_vertex(e.r)))
        attrs = [f"label={_quote(label_str(e.label))}",
                 f"style={'solid' if e.sign > 0 else 'dashed'}"]
        if e.orientation is Orientation.UNDIRECTED:
            src, dst = s, r
            attrs.append("dir=none")
        elif e.orientation is Orientation.S_TO_R:
            src, dst = s, r
        else:
            src, dst = r, s
        lines.append(f"  {src} -> {dst} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def check_shapes(A, B) -> None:
    if B.shape != (A.cols, A.rows):
        raise DimensionError(f"B must be {A.cols}x{A.rows} for A of shape {A.shape}, "
                             f"got {B.shape[0]}x{B.shape[1]}")
