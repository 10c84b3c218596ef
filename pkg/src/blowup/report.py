"""Matrix files, run configuration, and the structured report format.

Matrix file schema (plain text, ``#`` starts a comment)::

    field: fp 32003          # or "qq"
    variables: x1 x2 x3
    u: 1                     # optional, declared index u
    point: 1 0 0             # optional, a rational zero of I_{u+1}(phi)
    x1 + x2, 3*x3            # one matrix row per line,
    x2, x1 - x3              # entries separated by commas
    x3, x2

Reports are JSON documents with a fixed key order (see ``REPORT_KEYS``).
"""

from __future__ import annotations

import hashlib
import json
import os
from fractions import Fraction
from dataclasses import dataclass, fields
from pathlib import Path

from .field import CoeffField
from .groebner import Budget
from .invariants import PresentationInput
from .linmatrix import LinearMatrix, ShapeError
from .poly import ParseError, PolyRing, VariableBlock
from .theorems import DEFAULT_POINT_CAP, DEFAULT_RETRIES, NotEvaluated, VerificationReport

REPORT_SCHEMA = "blowup-report/1"
REPORT_KEYS = ("schema",) + tuple(f.name for f in fields(VerificationReport)) + ("consistent", "mismatches")


class MatrixFileError(ValueError):
    """Malformed matrix file; carries the 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    max_pairs: int = 50_000
    max_degree: int = 40
    retries: int = DEFAULT_RETRIES
    point_cap: int = DEFAULT_POINT_CAP
    seed: int = 0
    jobs: int = 1
    output: str | None = None
    max_d: int = 4
    max_n: int = 7

    def __post_init__(self):
        for name in ("max_pairs", "max_degree", "retries", "point_cap", "jobs", "max_d", "max_n"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "RunConfig":
        """Defaults from BLOWUP_MAX_PAIRS, BLOWUP_MAX_DEGREE, BLOWUP_RETRIES, BLOWUP_POINT_CAP."""
        env = {}
        for key, var in (("max_pairs", "BLOWUP_MAX_PAIRS"), ("max_degree", "BLOWUP_MAX_DEGREE"),
                         ("retries", "BLOWUP_RETRIES"), ("point_cap", "BLOWUP_POINT_CAP")):
            if os.environ.get(var):
                env[key] = int(os.environ[var])
        env.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**env)

    @property
    def budget(self) -> Budget:
        return Budget(self.max_pairs, self.max_degree)

    def echo(self) -> dict:
        return {"max_pairs": self.max_pairs, "max_degree": self.max_degree,
                "retries": self.retries, "point_cap": self.point_cap}


# --------------------------------------------------------------------------
# matrix files
# --------------------------------------------------------------------------

def _split_entries(text: str):
    """(entry, 0-based column offset) pairs of a comma-separated row."""
    out, start = [], 0
    for part in text.split(","):
        lead = len(part) - len(part.lstrip())
        out.append((part.strip(), start + lead))
        start += len(part) + 1
    return out


def parse_matrix_text(text: str, check: bool = True, presentation: bool = True) -> PresentationInput:
    """Parse the matrix-file schema; ``check`` attaches the hypothesis battery."""
    header: dict = {}
    rows: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        if sep and key.strip().lower() in ("field", "variables", "u", "point"):
            k = key.strip().lower()
            if k in header:
                raise MatrixFileError(f"duplicate '{k}' line", lineno)
            header[k] = (rest.strip(), lineno, len(key) + 2)
            continue
        if "field" not in header or "variables" not in header:
            raise MatrixFileError("matrix rows must follow the field and variables lines", lineno, 1)
        rows.append((lineno, line))
    for k in ("field", "variables"):
        if k not in header:
            raise MatrixFileError(f"missing '{k}:' line")
    ftext, fline, fcol = header["field"]
    try:
        field = CoeffField.from_spec(ftext)
    except ValueError as exc:
        raise MatrixFileError(str(exc), fline, fcol) from None
    vtext, vline, vcol = header["variables"]
    names = vtext.replace(",", " ").split()
    try:
        ring = PolyRing(field, [VariableBlock(tuple(names), "x")])
    except ValueError as exc:
        raise MatrixFileError(str(exc), vline, vcol) from None
    if not rows:
        raise MatrixFileError("no matrix rows")
    entries = []
    for lineno, line in rows:
        row = []
        for s, col in _split_entries(line):
            if not s:
                raise MatrixFileError("empty entry", lineno, col + 1)
            try:
                e = ring.parse(s, lineno)
            except ParseError as exc:
                raise MatrixFileError(str(exc).split(" at ")[0], lineno, col + exc.pos + 1) from None
            if not e.is_linear_in(names):
                raise MatrixFileError(f"entry {s!r} is not a linear form", lineno, col + 1)
            row.append(e)
        entries.append(row)
    width = len(entries[0])
    for (lineno, _), r in zip(rows, entries):
        if len(r) != width:
            raise ShapeError(f"line {lineno}: row has {len(r)} entries, expected {width}")
    phi = LinearMatrix(entries, "x", ring)
    if presentation and phi.nrows != phi.ncols + 1:
        raise ShapeError(f"presentation matrices are n x (n-1); got {phi.nrows} x {phi.ncols}")
    inp = PresentationInput(phi)
    if "u" in header:
        utext, uline, ucol = header["u"]
        try:
            inp.declared_u = int(utext)
        except ValueError:
            raise MatrixFileError(f"u must be an integer, got {utext!r}", uline, ucol) from None
    if "point" in header:
        ptext, pline, pcol = header["point"]
        try:
            pt = tuple(field(Fraction(c)) for c in ptext.replace(",", " ").split())
        except (ValueError, ZeroDivisionError):
            raise MatrixFileError(f"bad point {ptext!r}", pline, pcol) from None
        if len(pt) != len(names) or not any(pt):
            raise MatrixFileError("point must be a nonzero vector with one coordinate per variable", pline, pcol)
        inp.declared_point = pt
    if check and presentation:
        inp.run_checks()
    return inp


def parse_matrix_file(path, check: bool = True, presentation: bool = True) -> PresentationInput:
    """Read a matrix file into a validated PresentationInput (hypothesis battery attached)."""
    return parse_matrix_text(Path(path).read_text(), check, presentation)


def format_matrix_file(inp: PresentationInput, comment: str | None = None) -> str:
    phi = inp.phi
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"field: {phi.ring.field.spec}")
    lines.append("variables: " + " ".join(phi.variables))
    if inp.declared_u is not None:
        lines.append(f"u: {inp.declared_u}")
    if inp.declared_point is not None:
        lines.append("point: " + " ".join(phi.ring.field.to_str(c) for c in inp.declared_point))
    lines += [", ".join(r) for r in phi.to_strings()]
    return "\n".join(lines) + "\n"


def input_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

def _plain(value):
    if isinstance(value, NotEvaluated):
        return f"not-evaluated: {value.reason}"
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def report_dict(rep: VerificationReport, include_timings: bool = False, config: RunConfig | None = None) -> dict:
    out = {"schema": REPORT_SCHEMA}
    for f in fields(VerificationReport):
        if f.name == "timings" and not include_timings:
            continue
        out[f.name] = _plain(getattr(rep, f.name))
    out["consistent"] = rep.consistent
    out["mismatches"] = rep.mismatches()
    if config is not None:
        out["config"] = config.echo()
    return out


def dumps(data: dict) -> str:
    """Stable text form: insertion-ordered keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def render_report(rep: VerificationReport, include_timings: bool = False, config: RunConfig | None = None) -> str:
    return dumps(report_dict(rep, include_timings, config))
