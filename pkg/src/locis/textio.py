"""Text serialization for structures.

One document per structure. Grammar (line oriented, '#' starts a comment
line, blank lines ignored):

    %locis structure v1
    language:
    Succ/2
    Black/1
    elements:
    0
    1
    frontier:
    0
    tuples:
    Succ(0,1)
    Black(0)

Sections appear in the order language, elements, frontier, tuples. Symbol
lines are name/arity; symbol order in the file is the language's declaration
order. Element ids match [A-Za-z0-9_.+-]+. dump() emits the canonical form:
elements and frontier sorted lexicographically, tuples sorted by (symbol
declaration index, argument vector). parse() accepts entries in any order,
so dump(parse(s)) == s exactly when s is canonical.
"""

from __future__ import annotations

import re

from .core import ELEMENT_RE, Language, Structure
from .errors import ParseError

HEADER = "%locis structure v1"
_SECTIONS = ("language", "elements", "frontier", "tuples")
_SYMBOL_LINE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)/(\d+)\Z")
_TUPLE_LINE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\((.*)\)\Z")


def dumps(M):
    lines = [HEADER, "language:"]
    for name, arity in M.language.symbols:
        lines.append(f"{name}/{arity}")
    lines.append("elements:")
    lines.extend(M.elements)
    lines.append("frontier:")
    lines.extend(sorted(M.frontier))
    lines.append("tuples:")
    for name, _ in M.language.symbols:
        for t in M.tuples_by_symbol[name]:
            lines.append(f"{name}({','.join(t)})")
    return "\n".join(lines) + "\n"


def loads(text):
    symbols = []
    elements = []
    frontier = []
    tuples = []
    section = None
    saw_header = False
    seen_sections = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not saw_header:
            if line != HEADER:
                raise ParseError(line_no, raw, f"expected header {HEADER!r}")
            saw_header = True
            continue
        if line.endswith(":"):
            name = line[:-1]
            if name not in _SECTIONS:
                raise ParseError(line_no, raw, f"unknown section {name!r}")
            if name in seen_sections:
                raise ParseError(line_no, raw, f"duplicate section {name!r}")
            seen_sections.append(name)
            section = name
            continue
        if section is None:
            raise ParseError(line_no, raw, "entry before any section")
        if section == "language":
            m = _SYMBOL_LINE.match(line)
            if not m:
                raise ParseError(line_no, raw, "expected name/arity")
            symbols.append((m.group(1), int(m.group(2))))
        elif section in ("elements", "frontier"):
            if not ELEMENT_RE.match(line):
                raise ParseError(line_no, raw, "bad element id")
            (elements if section == "elements" else frontier).append(line)
        else:
            m = _TUPLE_LINE.match(line)
            if not m:
                raise ParseError(line_no, raw, "expected symbol(elem,...)")
            args = m.group(2).split(",") if m.group(2) else []
            for a in args:
                if not ELEMENT_RE.match(a):
                    raise ParseError(line_no, raw, f"bad element id {a!r} in tuple")
            tuples.append((m.group(1), args))

    if not saw_header:
        raise ParseError(0, "", "empty document")
    if "language" not in seen_sections:
        raise ParseError(0, "", "missing language section")
    # Validation errors (unknown symbols, arity, dangling ids) surface as the
    # structured core exceptions, not ParseError.
    return Structure(Language(symbols), elements, tuples, frontier=frontier)


def save(M, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps(M))


def load(path):
    with open(path, "r", encoding="ascii") as fh:
        return loads(fh.read())
