"""Plain-text set files.

    # comment
    group Z_4 x Z_4
    1,2
    3,3

The header names the group (``Z``, ``Z^d``, or ``x``-separated factors
``Z`` / ``Z_m``); each body line is one element as comma-separated integers.
"""
from __future__ import annotations

from .errors import DimensionError, SpanStructError
from .group import GroupSpec, GSet, canon_rows


class SetFileError(SpanStructError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def parse_set_file(text: str, dedupe: bool = False) -> GSet:
    spec = None
    rows, seen = [], {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if spec is None:
            if not line.startswith("group "):
                raise SetFileError("expected a 'group <SPEC>' header", lineno)
            try:
                spec = GroupSpec.parse(line[len("group "):])
            except DimensionError as exc:
                raise SetFileError(str(exc), lineno) from None
            continue
        try:
            vals = [int(tok) for tok in line.split(",")]
        except ValueError:
            raise SetFileError(f"not a comma-separated integer list: {line!r}", lineno) from None
        if len(vals) != spec.dim:
            raise SetFileError(f"expected {spec.dim} coordinates, got {len(vals)}", lineno)
        key = tuple(int(v) for v in canon_rows([vals], spec)[0])
        if key in seen:
            if not dedupe:
                raise SetFileError(f"duplicate element {list(key)} (first on line {seen[key]}); pass --dedupe", lineno)
            continue
        seen[key] = lineno
        rows.append(key)
    if spec is None:
        raise SetFileError("missing 'group <SPEC>' header")
    try:
        return GSet(spec, rows)
    except DimensionError as exc:
        raise SetFileError(str(exc)) from None


def serialize_set(A: GSet) -> str:
    lines = [f"group {A.spec}"]
    lines.extend(",".join(str(int(v)) for v in row) for row in A.coords)
    return "\n".join(lines) + "\n"


def read_set_file(path, dedupe: bool = False) -> GSet:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_set_file(fh.read(), dedupe=dedupe)
