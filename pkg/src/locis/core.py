"""Languages, finite structure windows, and ball extraction.

A Structure is a finite window of a possibly infinite relational structure.
Elements on the frontier may be missing incident tuples; everything else has
its complete 1-neighborhood. depth(u) is the Gaifman distance from u to the
nearest frontier element, and bounds the radius at which balls around u are
faithful to the infinite structure.

Element ids are opaque strings. The core never interprets them.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass

from .errors import (
    ArityMismatch,
    DanglingElement,
    InvariantViolation,
    UnfaithfulRadius,
    UnknownSymbol,
)

SYMBOL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
ELEMENT_RE = re.compile(r"[A-Za-z0-9_.+-]+\Z")


class Language:
    """An ordered list of relation symbols with arities.

    Symbol order is part of the language identity: canonical serializations
    and signatures list symbols in declaration order.
    """

    __slots__ = ("symbols", "arities", "_key")

    def __init__(self, symbols):
        symbols = tuple((str(name), int(arity)) for name, arity in symbols)
        seen = set()
        for name, arity in symbols:
            if not SYMBOL_RE.match(name):
                raise InvariantViolation("symbol-name", f"bad symbol name {name!r}")
            if name in seen:
                raise InvariantViolation("symbol-unique", f"duplicate symbol {name!r}")
            if arity < 1:
                raise InvariantViolation("arity-positive", f"symbol {name!r} has arity {arity}")
            seen.add(name)
        self.symbols = symbols
        self.arities = {name: arity for name, arity in symbols}
        self._key = symbols

    def arity(self, symbol):
        if symbol not in self.arities:
            raise UnknownSymbol(symbol, self)
        return self.arities[symbol]

    @property
    def unary_symbols(self):
        return tuple(n for n, a in self.symbols if a == 1)

    def __contains__(self, symbol):
        return symbol in self.arities

    def __eq__(self, other):
        return isinstance(other, Language) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        inner = ", ".join(f"{n}/{a}" for n, a in self.symbols)
        return f"Language({inner})"


class Structure:
    """A finite window: elements, tuples, and a frontier of truncated elements.

    Immutable after construction. Derived data (adjacency, depths) is computed
    lazily and cached; recomputation is idempotent, so concurrent readers are
    safe.
    """

    def __init__(self, language, elements, tuples, frontier=()):
        if not isinstance(language, Language):
            language = Language(language)
        self.language = language

        elements = [str(e) for e in elements]
        eset = set(elements)
        if len(eset) != len(elements):
            raise InvariantViolation("elements-unique", "duplicate element ids")
        for e in elements:
            if not ELEMENT_RE.match(e):
                raise InvariantViolation("element-id", f"bad element id {e!r}")
        self.elements = tuple(sorted(eset))
        self._eset = frozenset(eset)

        frontier = frozenset(str(e) for e in frontier)
        for e in frontier:
            if e not in self._eset:
                raise DanglingElement(e, ("frontier", e))
        self.frontier = frontier

        by_symbol = {name: set() for name, _ in language.symbols}
        for item in tuples:
            symbol, args = item[0], tuple(str(a) for a in item[1])
            if symbol not in language.arities:
                raise UnknownSymbol(symbol, language)
            if len(args) != language.arities[symbol]:
                raise ArityMismatch(symbol, language.arities[symbol], len(args))
            for a in args:
                if a not in self._eset:
                    raise DanglingElement(a, (symbol, args))
            by_symbol[symbol].add(args)
        # Duplicate tuples collapse via the set; canonical order is
        # (declaration index, argument vector).
        self.tuples_by_symbol = {name: tuple(sorted(ts)) for name, ts in by_symbol.items()}
        self._tuple_sets = {name: frozenset(ts) for name, ts in by_symbol.items()}

        self._adj = None
        self._incident = None
        self._depth = None
        self._cache = {}

    # -- basic queries ---------------------------------------------------

    def __contains__(self, element):
        return element in self._eset

    def __len__(self):
        return len(self.elements)

    def tuples_of(self, symbol):
        if symbol not in self.language.arities:
            raise UnknownSymbol(symbol, self.language)
        return self.tuples_by_symbol[symbol]

    def has_tuple(self, symbol, args):
        if symbol not in self.language.arities:
            raise UnknownSymbol(symbol, self.language)
        return tuple(args) in self._tuple_sets[symbol]

    def all_tuples(self):
        for name, _ in self.language.symbols:
            for t in self.tuples_by_symbol[name]:
                yield name, t

    def tuple_count(self):
        return sum(len(ts) for ts in self.tuples_by_symbol.values())

    def unary_profile(self, element):
        """Tuple of 0/1 flags, one per unary symbol in declaration order."""
        return tuple(
            1 if (element,) in self._tuple_sets[name] else 0
            for name in self.language.unary_symbols
        )

    # -- derived maps ----------------------------------------------------

    def adjacency(self):
        """Gaifman adjacency: u ~ v iff they co-occur in some tuple."""
        if self._adj is None:
            adj = {e: set() for e in self.elements}
            for _, ts in self.tuples_by_symbol.items():
                for t in ts:
                    if len(t) < 2:
                        continue
                    distinct = set(t)
                    if len(distinct) < 2:
                        continue
                    for a in distinct:
                        adj[a].update(distinct)
            for e, s in adj.items():
                s.discard(e)
            self._adj = {e: tuple(sorted(s)) for e, s in adj.items()}
        return self._adj

    def incident(self, element):
        """All tuples containing the element, as (symbol, args) pairs."""
        if self._incident is None:
            inc = {e: [] for e in self.elements}
            for name, _ in self.language.symbols:
                for t in self.tuples_by_symbol[name]:
                    for a in set(t):
                        inc[a].append((name, t))
            self._incident = {e: tuple(v) for e, v in inc.items()}
        return self._incident[element]

    def depths(self):
        """Distance from each element to the nearest frontier element.

        math.inf everywhere when the frontier is empty (closed window).
        """
        if self._depth is None:
            if not self.frontier:
                self._depth = {e: math.inf for e in self.elements}
            else:
                adj = self.adjacency()
                dist = {e: math.inf for e in self.elements}
                queue = deque()
                for e in self.frontier:
                    dist[e] = 0
                    queue.append(e)
                while queue:
                    u = queue.popleft()
                    d = dist[u] + 1
                    for v in adj[u]:
                        if dist[v] > d:
                            dist[v] = d
                            queue.append(v)
                self._depth = dist
        return self._depth

    def depth(self, element):
        if element not in self._eset:
            raise DanglingElement(element, ("depth", element))
        return self.depths()[element]

    def is_closed(self):
        return not self.frontier

    def max_depth(self):
        """Largest depth over elements; -1 on the empty structure."""
        if not self.elements:
            return -1
        return max(self.depths().values())

    def deepest_element(self):
        """Canonical anchor: lexicographically least element of maximal depth."""
        if not self.elements:
            raise InvariantViolation("nonempty", "empty structure has no anchor")
        depths = self.depths()
        return min(self.elements, key=lambda e: (-depths[e], e))

    def faithful_elements(self, h):
        """Elements whose h-ball is certified by the window."""
        depths = self.depths()
        return [e for e in self.elements if depths[e] >= h]

    def is_connected(self):
        if len(self.elements) <= 1:
            return True
        adj = self.adjacency()
        seen = {self.elements[0]}
        queue = deque(seen)
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == len(self.elements)

    def local_finiteness_witness(self):
        """(max |B(u,1)|, witness u) over interior elements; (0, None) if none.

        The bound for the represented infinite structure is only certified at
        interior elements, where the 1-neighborhood is complete.
        """
        depths = self.depths()
        adj = self.adjacency()
        best, witness = 0, None
        for e in self.elements:  # sorted, so the first maximum is the witness
            if depths[e] < 1:
                continue
            size = len(adj[e]) + 1
            if size > best:
                best, witness = size, e
        return best, witness

    # -- balls -------------------------------------------------------------

    def ball_elements(self, center, h):
        """BFS element set of B(center, h), without the faithfulness check."""
        if center not in self._eset:
            raise DanglingElement(center, ("ball", center))
        adj = self.adjacency()
        dist = {center: 0}
        queue = deque([center])
        while queue:
            u = queue.popleft()
            d = dist[u]
            if d == h:
                continue
            for v in adj[u]:
                if v not in dist:
                    dist[v] = d + 1
                    queue.append(v)
        return dist

    def ball(self, center, h):
        """Extract (B(center,h), center) as a standalone closed structure."""
        if center not in self._eset:
            raise DanglingElement(center, ("ball", center))
        h = int(h)
        if h < 0:
            raise InvariantViolation("radius", f"negative radius {h}")
        d = self.depth(center)
        if d < h:
            raise UnfaithfulRadius(center, h, d)
        dist = self.ball_elements(center, h)
        members = frozenset(dist)
        tuples = []
        for e in members:
            for name, t in self.incident(e):
                if all(a in members for a in t):
                    tuples.append((name, t))
        sub = Structure(self.language, members, tuples, frontier=())
        return PointedBall(structure=sub, center=center, radius=h)

    def restrict(self, members, frontier):
        """Induced substructure on a member set with an explicit frontier."""
        members = set(members)
        tuples = []
        for e in members:
            for name, t in self.incident(e):
                if all(a in members for a in t):
                    tuples.append((name, t))
        return Structure(self.language, members, tuples, frontier=frontier)

    # -- equality ----------------------------------------------------------

    def content_key(self):
        return (
            self.language._key,
            self.elements,
            tuple(sorted(self.frontier)),
            tuple((n, self.tuples_by_symbol[n]) for n, _ in self.language.symbols),
        )

    def __eq__(self, other):
        return isinstance(other, Structure) and self.content_key() == other.content_key()

    def __hash__(self):
        return hash(self.content_key())

    def __repr__(self):
        return (
            f"Structure(|elements|={len(self.elements)}, "
            f"|tuples|={self.tuple_count()}, |frontier|={len(self.frontier)})"
        )


@dataclass(frozen=True)
class PointedBall:
    """A ball extracted as a standalone closed structure, pointed at center."""

    structure: Structure
    center: str
    radius: int

    def __post_init__(self):
        assert self.center in self.structure, "center must belong to the ball"

    def __len__(self):
        return len(self.structure)


def validate_structure(spec):
    """Build and validate a Structure from a raw description.

    Accepts a Structure (revalidated by copy) or a mapping with keys
    'language', 'elements', 'tuples', 'frontier'.
    """
    if isinstance(spec, Structure):
        return Structure(
            spec.language,
            spec.elements,
            list(spec.all_tuples()),
            frontier=spec.frontier,
        )
    return Structure(
        spec["language"],
        spec.get("elements", ()),
        spec.get("tuples", ()),
        frontier=spec.get("frontier", ()),
    )


def faithful_radius(M, u):
    """depth(u): ball(M, u, h) succeeds exactly when h <= depth(u)."""
    return M.depth(u)
