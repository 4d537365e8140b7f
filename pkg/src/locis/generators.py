"""Window generators for the example families.

All coloring decisions in gen_sturmian run on exact integer arithmetic: the
half-open interval convention decides boundary cases, and those boundary
cases are exactly what separates the symmetric parameter cosets from the
asymmetric ones. No floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .core import Language, Structure
from .errors import (
    BadAddressEntry,
    InvariantViolation,
    RationalSlope,
)


def _is_square(n):
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def _sign_quad(P, Q, D):
    """Sign of P + Q*sqrt(D), exact."""
    if Q == 0:
        return (P > 0) - (P < 0)
    if P == 0:
        return (Q > 0) - (Q < 0)
    if P > 0 and Q > 0:
        return 1
    if P < 0 and Q < 0:
        return -1
    # Opposite signs: compare P^2 against Q^2 * D.
    lhs, rhs = P * P, Q * Q * D
    if lhs == rhs:
        return 0
    if P > 0:
        return 1 if lhs > rhs else -1
    return -1 if lhs > rhs else 1


def _floor_quad(P, Q, D, U):
    """floor((P + Q*sqrt(D)) / U) for U > 0, exact."""
    assert U > 0
    approx = P + (isqrt(Q * Q * D) if Q >= 0 else -isqrt(Q * Q * D) - 1)
    n = approx // U
    # approx is within 1 of the true numerator, so at most two corrections.
    while _sign_quad(P - (n + 1) * U, Q, D) >= 0:
        n += 1
    while _sign_quad(P - n * U, Q, D) < 0:
        n -= 1
    return n


class QuadraticIrrational:
    """Exact value (p + q*sqrt(D)) / u with integer p, q, u and D >= 0.

    Rational values are normalized to q = 0, D = 0. Square D folds into p.
    Comparisons and floors reduce to integer sign tests.
    """

    __slots__ = ("p", "q", "u", "D")

    def __init__(self, p, q, u, D):
        if u == 0:
            raise InvariantViolation("denominator", "u must be nonzero")
        if D < 0:
            raise InvariantViolation("radicand", "D must be nonnegative")
        if q != 0 and _is_square(D):
            p, q, D = p + q * isqrt(D), 0, 0
        if q == 0:
            D = 0
        if u < 0:
            p, q, u = -p, -q, -u
        g = gcd(gcd(abs(p), abs(q)), u)
        if g > 1:
            p, q, u = p // g, q // g, u // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticIrrational is immutable")

    @classmethod
    def sqrt(cls, D):
        return cls(0, 1, 1, D)

    @classmethod
    def from_rational(cls, value):
        f = Fraction(value)
        return cls(f.numerator, 0, f.denominator, 0)

    @classmethod
    def coerce(cls, value, D=None):
        if isinstance(value, cls):
            x = value
        else:
            x = cls.from_rational(value)
        if D is not None and x.q == 0 and D != 0:
            return cls(x.p, 0, x.u, 0)
        return x

    @property
    def is_rational(self):
        return self.q == 0

    def _common(self, other):
        other = QuadraticIrrational.coerce(other)
        if self.q != 0 and other.q != 0 and self.D != other.D:
            raise InvariantViolation("radicand", f"mixed radicands {self.D} and {other.D}")
        D = self.D if self.q != 0 else other.D
        return other, D

    def __add__(self, other):
        other, D = self._common(other)
        return QuadraticIrrational(
            self.p * other.u + other.p * self.u,
            self.q * other.u + other.q * self.u,
            self.u * other.u,
            D,
        )

    __radd__ = __add__

    def __neg__(self):
        return QuadraticIrrational(-self.p, -self.q, self.u, self.D)

    def __sub__(self, other):
        return self + (-QuadraticIrrational.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other, D = self._common(other)
        return QuadraticIrrational(
            self.p * other.p + self.q * other.q * D,
            self.p * other.q + self.q * other.p,
            self.u * other.u,
            D,
        )

    __rmul__ = __mul__

    def sign(self):
        return _sign_quad(self.p, self.q, self.D)

    def __floor__(self):
        return _floor_quad(self.p, self.q, self.D, self.u)

    def floor(self):
        return self.__floor__()

    def is_integer(self):
        return self.q == 0 and self.u == 1

    def _cmp(self, other):
        return (self - other).sign()

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash((self.p, self.q, self.u, self.D))

    def __float__(self):
        return (self.p + self.q * (self.D ** 0.5)) / self.u

    def __str__(self):
        return f"({self.p}+{self.q}*sqrt({self.D}))/{self.u}"

    __repr__ = __str__

    @classmethod
    def parse(cls, text):
        """Parse '(p+q*sqrt(D))/u' or a plain rational like '1/3' or '2'."""
        import re

        text = text.strip().replace(" ", "")
        m = re.fullmatch(r"\((-?\d+)([+-]\d+)\*sqrt\((\d+)\)\)/(-?\d+)", text)
        if m:
            return cls(int(m.group(1)), int(m.group(2)), int(m.group(4)), int(m.group(3)))
        m = re.fullmatch(r"(-?\d+)(/(-?\d+))?", text)
        if m:
            return cls(int(m.group(1)), 0, int(m.group(3) or 1), 0)
        raise InvariantViolation("literal", f"cannot parse quadratic literal {text!r}")


@dataclass(frozen=True)
class AddressSequence:
    """Finite description of an infinite symbol sequence.

    prefix holds the first entries explicitly; past it the tail rule applies.
    tail kinds: ('constant', c), ('periodic', word), ('explicit',) for a
    purely finite sequence, ('thue_morse', lo, hi) for the built-in aperiodic
    sequence over a two-letter alphabet.
    """

    prefix: tuple = ()
    tail: tuple = ("explicit",)

    def entry(self, n):
        if n < 0:
            raise BadAddressEntry(n, "negative index")
        if n < len(self.prefix):
            return self.prefix[n]
        m = n - len(self.prefix)
        kind = self.tail[0]
        if kind == "constant":
            return self.tail[1]
        if kind == "periodic":
            word = self.tail[1]
            return word[m % len(word)]
        if kind == "thue_morse":
            lo, hi = self.tail[1], self.tail[2]
            return hi if bin(m).count("1") % 2 else lo
        raise BadAddressEntry(n, "sequence is finite")

    @classmethod
    def constant(cls, c, prefix=()):
        return cls(tuple(prefix), ("constant", c))

    @classmethod
    def periodic(cls, word, prefix=()):
        word = tuple(word)
        if not word:
            raise BadAddressEntry(0, "empty period")
        return cls(tuple(prefix), ("periodic", word))

    @classmethod
    def explicit(cls, entries):
        return cls(tuple(entries), ("explicit",))

    @classmethod
    def thue_morse(cls, lo=0, hi=1, prefix=()):
        return cls(tuple(prefix), ("thue_morse", lo, hi))

    @classmethod
    def parse(cls, text):
        """Parse CLI syntax: 'tm', 'constant:1', 'periodic:122',
        'explicit:0110', optionally '<digits>;<tail>' for a prefix."""
        prefix = ()
        if ";" in text:
            head, text = text.split(";", 1)
            prefix = tuple(int(ch) for ch in head)
        if text in ("tm", "thue_morse", "thue-morse"):
            return cls.thue_morse(prefix=prefix)
        if text in ("tm12",):
            return cls.thue_morse(1, 2, prefix=prefix)
        if ":" in text:
            kind, data = text.split(":", 1)
            if kind == "constant":
                return cls.constant(int(data), prefix=prefix)
            if kind == "periodic":
                return cls.periodic(tuple(int(ch) for ch in data), prefix=prefix)
            if kind == "explicit":
                return cls.explicit(tuple(prefix) + tuple(int(ch) for ch in data))
        raise BadAddressEntry(0, f"cannot parse address {text!r}")

    def describe(self):
        head = "".join(str(e) for e in self.prefix)
        kind = self.tail[0]
        if kind == "constant":
            body = f"constant:{self.tail[1]}"
        elif kind == "periodic":
            body = "periodic:" + "".join(str(e) for e in self.tail[1])
        elif kind == "thue_morse":
            body = f"thue_morse({self.tail[1]},{self.tail[2]})"
        else:
            body = "explicit"
        return f"{head};{body}" if head else body


# ---------------------------------------------------------------------------
# Example 1: Sturmian-type two-colorings of Z.


def _count_column(a, rp, rq, ru, sp, sq, su, D, increasing):
    """Number of b with the unit box at (a, b) meeting the line y = r*x + s.

    For increasing lines the y-range over the half-open column is half-open
    at the top, giving strict bounds on both sides; for decreasing lines the
    openness flips to the lower end.
    """
    # Endpoints over the common denominator 2*ru*su. For increasing lines
    # L = r*(a-1/2) + s - 1/2 and U = r*(a+1/2) + s + 1/2; for decreasing
    # lines the line enters the column high at its closed left edge, so the
    # roles of the edges swap: L = r*(a+1/2) + s - 1/2, U = r*(a-1/2) + s + 1/2.
    den = 2 * ru * su
    left, right = 2 * a - 1, 2 * a + 1
    lo_edge, hi_edge = (left, right) if increasing else (right, left)
    lo_p = rp * lo_edge * su + (2 * sp - su) * ru
    lo_q = rq * lo_edge * su + 2 * sq * ru
    hi_p = rp * hi_edge * su + (2 * sp + su) * ru
    hi_q = rq * hi_edge * su + 2 * sq * ru
    if increasing:
        # Count integers b with L < b < U (strict on both sides).
        hi_floor = _floor_quad(hi_p, hi_q, D, den)
        if hi_q == 0 and hi_p == hi_floor * den:
            hi_floor -= 1  # greatest integer strictly below U
        lo_floor = _floor_quad(lo_p, lo_q, D, den)
        return hi_floor - lo_floor
    # Decreasing: the y-range is half-open at the bottom, so count L < b <= U.
    return _floor_quad(hi_p, hi_q, D, den) - _floor_quad(lo_p, lo_q, D, den)


def sturmian_colors(r, s, lo, hi):
    """Exact color flags for columns lo..hi: 1 = Black (n+2 points)."""
    r = QuadraticIrrational.coerce(r)
    if r.is_rational:
        raise RationalSlope(r)
    s = QuadraticIrrational.coerce(s, r.D)
    if not s.is_rational and s.D != r.D:
        raise InvariantViolation("radicand", "s must live over the same radicand as r")
    D = r.D
    increasing = r.sign() > 0
    n = (r if increasing else -r).floor()  # integral part of |r|
    flags = []
    for a in range(lo, hi + 1):
        c = _count_column(a, r.p, r.q, r.u, s.p, s.q, s.u, D, increasing)
        if c == n + 1:
            flags.append(0)
        elif c == n + 2:
            flags.append(1)
        else:
            raise InvariantViolation(
                "column-count", f"column {a} meets {c} boxes, expected {n + 1} or {n + 2}"
            )
    return flags


def gen_sturmian(r, s, half_width):
    """Two-colored Z window: Succ edges plus White/Black column colors."""
    W = int(half_width)
    if W < 1:
        raise InvariantViolation("half-width", "half_width must be >= 1")
    flags = sturmian_colors(r, s, -W, W)
    language = Language([("Succ", 2), ("White", 1), ("Black", 1)])
    elements = [str(a) for a in range(-W, W + 1)]
    tuples = []
    for a in range(-W, W):
        tuples.append(("Succ", (str(a), str(a + 1))))
    for a, f in zip(range(-W, W + 1), flags):
        tuples.append(("Black" if f else "White", (str(a),)))
    return Structure(language, elements, tuples, frontier=(str(-W), str(W)))


# ---------------------------------------------------------------------------
# Example 4: k-ary functional trees with an upward address.


def _tree_id(j, word):
    if not word:
        return f"c{j}"
    return f"c{j}." + "-".join(str(w) for w in word)


def gen_kary_tree(k, address, depth, halo=14):
    """Window of the k-ary tree: ancestor chain following the address plus a
    complete ball region around the anchor.

    The window contains the anchor's ancestors c0..c<depth> and every tree
    node within distance halo of the anchor. Tuples P_i(parent, child) mark
    the i-th child edge. Frontier is computed exactly: a node is frontier
    iff its parent or any of its k children is missing.
    """
    k = int(k)
    if k < 2:
        raise InvariantViolation("branching", "k must be >= 2")
    depth = int(depth)
    halo = int(halo)
    if depth < 1 or halo < 1:
        raise InvariantViolation("extent", "depth and halo must be >= 1")

    addr = []
    for m in range(depth):
        e = address.entry(m)
        if not isinstance(e, int) or not (1 <= e <= k):
            raise BadAddressEntry(m, e)
        addr.append(e)

    # Nodes are (j, word): start at the anchor's j-th ancestor, then follow
    # child labels in word. Canonical form requires word[0] != addr[j-1]
    # (otherwise the node re-enters the chain lower down).
    nodes = set()
    for j in range(depth + 1):
        nodes.add((j, ()))
    top = min(halo, depth)
    for j in range(top + 1):
        budget = halo - j
        if budget <= 0:
            continue
        stack = [()]
        while stack:
            word = stack.pop()
            if len(word) >= budget:
                continue
            for i in range(1, k + 1):
                if not word and j >= 1 and i == addr[j - 1]:
                    continue
                nw = word + (i,)
                nodes.add((j, nw))
                stack.append(nw)

    def parent_of(node):
        j, word = node
        if word:
            return (j, word[:-1])
        if j >= depth:
            return None  # above the window
        return (j + 1, ())

    def child_of(node, i):
        j, word = node
        if not word and j >= 1 and i == addr[j - 1]:
            return (j - 1, ())
        return (j, word + (i,))

    ids = {node: _tree_id(*node) for node in nodes}
    language = Language([(f"P{i}", 2) for i in range(1, k + 1)])
    tuples = []
    frontier = []
    for node in nodes:
        j, word = node
        missing = False
        par = parent_of(node)
        if par is None or par not in nodes:
            missing = True
        else:
            label = word[-1] if word else addr[j]
            tuples.append((f"P{label}", (ids[par], ids[node])))
        for i in range(1, k + 1):
            if child_of(node, i) not in nodes:
                missing = True
        if missing:
            frontier.append(ids[node])
    return Structure(language, ids.values(), tuples, frontier=frontier)


# ---------------------------------------------------------------------------
# Example 3: combinatorial patches of the half-plane binary tiling.


def gen_binary_hyperbolic(address, levels, half_width, support_radius=10):
    """Patch of the binary tiling around an anchor column.

    Tiles are (level, offset) with the anchor chain at offset 0 on levels
    0..levels. a_n = address.entry(n-1) for n >= 1; a_n = 0 below the anchor
    level (pure labeling convention for the complete binary cone below).

    Orientation convention: a_n = 0 means the chain's level-(n-1) tile is the
    LEFT child of its level-n tile. Children of (n, m) are
    (n-1, 2m - a_n) and (n-1, 2m - a_n + 1); Above points at the parent,
    Right at the same-level successor.

    The window spans levels -support_radius..levels. Strips cover the
    horizontal extent of half_width anchor-level tiles, never narrower than
    support_radius tiles, so symmetry searches have a usable interior along
    the whole chain.
    """
    levels = int(levels)
    W = int(half_width)
    R = int(support_radius)
    if levels < 1 or W < 1 or R < 1:
        raise InvariantViolation("extent", "levels, half_width, support_radius must be >= 1")

    a = {}
    for n in range(1, levels + 1):
        e = address.entry(n - 1)
        if e not in (0, 1):
            raise BadAddressEntry(n - 1, e)
        a[n] = e
    for n in range(-R, 1):
        a[n] = 0

    tiles = set()
    for n in range(0, levels + 1):
        w = max(W >> n, R) + 2
        for m in range(-w, w + 1):
            tiles.add((n, m))
    for j in range(1, R + 1):
        lo = -(R + 1) * (1 << j)
        hi = (R + 2) * (1 << j)
        for m in range(lo, hi + 1):
            tiles.add((-j, m))

    def parent_of(t):
        n, m = t
        an1 = a.get(n + 1)
        if an1 is None:
            return None  # above the top level: the parent offset is unknown
        return (n + 1, (m + an1) // 2)

    def children_of(t):
        n, m = t
        an = a.get(n)
        if an is None:
            return ()
        return ((n - 1, 2 * m - an), (n - 1, 2 * m - an + 1))

    ids = {t: f"L{t[0]}o{t[1]}" for t in tiles}
    language = Language([("Above", 2), ("Right", 2)])
    tuples = []
    frontier = []
    for t in tiles:
        n, m = t
        missing = False
        par = parent_of(t)
        if par is not None and par in tiles:
            tuples.append(("Above", (ids[t], ids[par])))
        else:
            missing = True
        kids = children_of(t)
        if len(kids) != 2 or any(c not in tiles for c in kids):
            missing = True
        right = (n, m + 1)
        if right in tiles:
            tuples.append(("Right", (ids[t], ids[right])))
        else:
            missing = True
        if (n, m - 1) not in tiles:
            missing = True
        if missing:
            frontier.append(ids[t])
    return Structure(language, ids.values(), tuples, frontier=frontier)


# ---------------------------------------------------------------------------
# Example 5: balls in the Cayley structure of a free group.


def gen_cayley_free(k, radius):
    """Ball of the free group F_k under R_i(y, y*x_i); frontier = boundary."""
    k = int(k)
    R = int(radius)
    if k < 1 or R < 0:
        raise InvariantViolation("extent", "need k >= 1 and radius >= 0")
    if k > 26:
        raise InvariantViolation("branching", "k > 26 exceeds the id alphabet")

    letters = "abcdefghijklmnopqrstuvwxyz"

    def word_id(word):
        if not word:
            return "0"
        return "".join(letters[i - 1] if i > 0 else letters[-i - 1].upper() for i in word)

    words = [()]
    sphere = [()]
    for _ in range(R):
        nxt = []
        for w in sphere:
            for g in range(1, k + 1):
                for step in (g, -g):
                    if w and w[-1] == -step:
                        continue
                    nxt.append(w + (step,))
        words.extend(nxt)
        sphere = nxt
    wset = set(words)

    language = Language([(f"R{i}", 2) for i in range(1, k + 1)])
    tuples = []
    frontier = []
    for w in words:
        missing = False
        for g in range(1, k + 1):
            for step in (g, -g):
                if w and w[-1] == -step:
                    target = w[:-1]
                else:
                    target = w + (step,)
                if target in wset:
                    if step > 0:
                        tuples.append((f"R{g}", (word_id(w), word_id(target))))
                else:
                    missing = True
        if missing:
            frontier.append(word_id(w))
    return Structure(language, [word_id(w) for w in words], tuples, frontier=frontier)


# ---------------------------------------------------------------------------
# Grids and tori (test fixture family).


def gen_grid(dims, mode="window", periods=None, colormap=None, phase=None):
    """Z^d window or closed torus with direction relations and unary colors.

    Window mode: coordinates range over [-n_i, n_i] per dimension, frontier
    is the boundary shell. Torus mode: coordinates over [0, n_i), closed.
    Coloring: colormap maps residue tuples (mod periods) to unary symbol
    names; phase shifts coordinates before the residue is taken, which moves
    the coloring relative to the window.
    """
    dims = tuple(int(n) for n in dims)
    if not dims or any(n < 1 for n in dims):
        raise InvariantViolation("dims", "dims must be nonempty positive sizes")
    d = len(dims)
    torus = mode == "torus"
    if mode not in ("window", "torus"):
        raise InvariantViolation("mode", f"unknown grid mode {mode!r}")
    if colormap:
        if periods is None or len(periods) != d:
            raise InvariantViolation("coloring", "colormap requires matching periods")
        periods = tuple(int(p) for p in periods)
    phase = tuple(phase) if phase else (0,) * d

    if torus:
        ranges = [range(0, n) for n in dims]
    else:
        ranges = [range(-n, n + 1) for n in dims]

    import itertools

    coords = list(itertools.product(*ranges))

    def cid(c):
        return "_".join(str(x) for x in c)

    rel_names = ["Succ"] if d == 1 else [f"E{i}" for i in range(1, d + 1)]
    color_names = sorted(set(colormap.values())) if colormap else []
    language = Language([(n, 2) for n in rel_names] + [(n, 1) for n in color_names])

    cset = set(coords)
    tuples = []
    frontier = []
    for c in coords:
        missing = False
        for i in range(d):
            for sgn in (1, -1):
                nxt = list(c)
                nxt[i] += sgn
                if torus:
                    nxt[i] %= dims[i]
                nxt = tuple(nxt)
                if nxt in cset:
                    if sgn == 1 and nxt != c:
                        tuples.append((rel_names[i], (cid(c), cid(nxt))))
                else:
                    missing = True
        if colormap:
            residue = tuple((c[i] + phase[i]) % periods[i] for i in range(d))
            color = colormap.get(residue)
            if color is not None:
                tuples.append((color, (cid(c),)))
        if missing:
            frontier.append(cid(c))
    return Structure(language, [cid(c) for c in coords], tuples, frontier=frontier)


def checkerboard_colormap(d=2):
    """Parity coloring: Black on odd coordinate sum, White on even."""
    import itertools

    cmap = {}
    for residue in itertools.product((0, 1), repeat=d):
        cmap[residue] = "Black" if sum(residue) % 2 else "White"
    return (2,) * d, cmap
