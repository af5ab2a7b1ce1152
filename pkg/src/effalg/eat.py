"""Plain-text algebra format (EAT): parser and canonical serializer.

Line-based grammar, whitespace-separated tokens, '#' starts a comment:

    elements <name>+        declare elements, in carrier order
    zero <name>             exactly one
    unit <name>             exactly one
    sum <x> <y> <z>         x + y = z; implies sum y x z

Pairs never mentioned stay undefined.  Conflicting re-definitions of a cell
are errors citing both lines.  The serializer emits elements in carrier
order and only the index-ordered half of each sum, one line per defined
cell, so parse(serialize(E)) reproduces E's table exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .core import UNDEFINED, EffectAlgebra, StructureError, SumTable

_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class ParseIssue:
    line: int
    col: int
    message: str

    def __str__(self):
        return f"line {self.line}, col {self.col}: {self.message}"


class EATParseError(Exception):
    """Carries every issue found in the document."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__(
            "; ".join(str(i) for i in self.issues[:5])
            + (f" (+{len(self.issues) - 5} more)" if len(self.issues) > 5 else "")
        )


def parse_eat(text: str) -> SumTable:
    """Parse an EAT document into a sum table (no axiom checking here)."""
    issues = []
    declared = []            # (name, line, col)
    zero_decls = []          # (name, line, col)
    unit_decls = []
    sum_decls = []           # (x, y, z tokens with positions, line)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(body)]
        if not toks:
            continue
        head, hcol = toks[0]
        args = toks[1:]
        if head == "elements":
            if not args:
                issues.append(ParseIssue(lineno, hcol, "elements line needs at least one name"))
            declared.extend((t, lineno, c) for t, c in args)
        elif head in ("zero", "unit"):
            if len(args) != 1:
                issues.append(ParseIssue(lineno, hcol, f"{head} line needs exactly one name"))
                continue
            (zero_decls if head == "zero" else unit_decls).append(
                (args[0][0], lineno, args[0][1])
            )
        elif head == "sum":
            if len(args) != 3:
                issues.append(ParseIssue(lineno, hcol, "sum line needs exactly three names"))
                continue
            sum_decls.append((args, lineno))
        else:
            issues.append(ParseIssue(lineno, hcol, f"unknown directive {head!r}"))

    names = []
    index = {}
    for name, lineno, col in declared:
        if name in index:
            issues.append(ParseIssue(lineno, col, f"duplicate element name {name!r}"))
        else:
            index[name] = len(names)
            names.append(name)
    if not names:
        issues.append(ParseIssue(0, 0, "missing elements declaration"))

    def resolve(decls, label):
        if not decls:
            issues.append(ParseIssue(0, 0, f"missing {label} declaration"))
            return None
        if len(decls) > 1:
            lines = ", ".join(str(d[1]) for d in decls)
            issues.append(ParseIssue(decls[1][1], decls[1][2],
                                     f"multiple {label} declarations (lines {lines})"))
        name, lineno, col = decls[0]
        if name not in index:
            issues.append(ParseIssue(lineno, col, f"unknown element name {name!r}"))
            return None
        return index[name]

    zero = resolve(zero_decls, "zero")
    unit = resolve(unit_decls, "unit")

    cells = {}               # unordered pair -> (value index, line)
    for args, lineno in sum_decls:
        idxs = []
        ok = True
        for tok, col in args:
            if tok not in index:
                issues.append(ParseIssue(lineno, col, f"unknown element name {tok!r}"))
                ok = False
            else:
                idxs.append(index[tok])
        if not ok:
            continue
        x, y, z = idxs
        key = (min(x, y), max(x, y))
        if key in cells and cells[key][0] != z:
            issues.append(ParseIssue(
                lineno, args[2][1],
                f"cell {args[0][0]}+{args[1][0]} already set to "
                f"{names[cells[key][0]]!r} at line {cells[key][1]}",
            ))
            continue
        cells.setdefault(key, (z, lineno))

    if zero is not None and unit is not None and zero == unit:
        issues.append(ParseIssue(zero_decls[0][1], zero_decls[0][2],
                                 "zero and unit must be distinct"))
    if issues:
        raise EATParseError(issues)

    n = len(names)
    arr = np.full((n, n), UNDEFINED, dtype=np.int16)
    for (x, y), (z, _line) in cells.items():
        arr[x, y] = arr[y, x] = z
    try:
        return SumTable(names, zero, unit, arr)
    except StructureError as exc:
        raise EATParseError([ParseIssue(0, 0, str(exc))]) from exc


def serialize_eat(obj) -> str:
    """Canonical document for a sum table or validated algebra."""
    t = obj.sum_table() if isinstance(obj, EffectAlgebra) else obj
    if not isinstance(t, SumTable):
        raise StructureError("serialize_eat expects a SumTable or EffectAlgebra")
    for name in t.names:
        if any(ch.isspace() for ch in name) or "#" in name:
            raise StructureError(f"name {name!r} cannot be serialized")
    lines = [
        "elements " + " ".join(t.names),
        f"zero {t.names[t.zero]}",
        f"unit {t.names[t.unit]}",
    ]
    for i in range(t.n):
        for j in range(i, t.n):
            v = t.cell(i, j)
            if v != UNDEFINED:
                lines.append(f"sum {t.names[i]} {t.names[j]} {t.names[v]}")
    return "\n".join(lines) + "\n"
