"""Pointed isomorphism search, canonical signatures, ball census, LIP and
extraction comparison.

The search engine works directly on parent windows: it grows BFS layers
around both centers in lockstep and backtracks over layer-respecting
assignments. A pointed isomorphism at radius r restricts to one at every
r' < r, so candidates die monotonically; a death certified at a faithful
layer rules the candidate out at every larger radius. The engine reports
which of the three cases happened: iso found at the requested radius, death
at a certified layer, or window exhaustion with the candidate still alive.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter, deque
from dataclasses import dataclass

from .core import PointedBall, Structure
from .errors import (
    InvariantViolation,
    LanguageMismatch,
    NoFaithfulElements,
    VerificationFailed,
    WindowExhausted,
)


class View:
    """Query adapter over a Structure, optionally reversing tuple order.

    Reversal turns every tuple (x_1,...,x_k) into (x_k,...,x_1). A pointed
    isomorphism onto a reversed view is an orientation-reversing symmetry
    approximant (a mirror). Gaifman adjacency and depths are unaffected.
    """

    __slots__ = ("base", "reverse")

    def __init__(self, base, reverse=False):
        self.base = base
        self.reverse = reverse

    @property
    def language(self):
        return self.base.language

    def adj(self, u):
        return self.base.adjacency()[u]

    def depth(self, u):
        return self.base.depth(u)

    def unary_profile(self, u):
        return self.base.unary_profile(u)

    def incident(self, u):
        if not self.reverse:
            return self.base.incident(u)
        return tuple((sym, t[::-1]) for sym, t in self.base.incident(u))

    def has_tuple(self, sym, args):
        if self.reverse:
            args = tuple(args)[::-1]
        return self.base.has_tuple(sym, args)


@dataclass
class PartialIso:
    """An injective map with a verified preservation certificate.

    reversed_target marks orientation-reversing maps: preservation is
    certified against the argument-reversed target.
    """

    source: Structure
    target: Structure
    mapping: dict
    anchor: str
    certified_radius: int
    reversed_target: bool = False

    def image_anchor(self):
        return self.mapping[self.anchor]

    def is_identity(self):
        return not self.reversed_target and all(k == v for k, v in self.mapping.items())

    def verify(self):
        """Re-check injectivity and two-way preservation on the domain."""
        dom = set(self.mapping)
        img = set(self.mapping.values())
        if len(img) != len(dom):
            raise VerificationFailed("injectivity", "mapping is not injective")
        tview = View(self.target, self.reversed_target)
        inverse = {v: k for k, v in self.mapping.items()}
        for u in dom:
            for sym, t in self.source.incident(u):
                if all(x in dom for x in t):
                    image = tuple(self.mapping[x] for x in t)
                    if not tview.has_tuple(sym, image):
                        raise VerificationFailed("preservation", (sym, t))
        for v in img:
            for sym, t in tview.incident(v):
                if all(x in inverse for x in t):
                    pre = tuple(inverse[x] for x in t)
                    if not self.source.has_tuple(sym, pre):
                        raise VerificationFailed("reflection", (sym, t))
        return True

    def as_dict(self):
        return {
            "anchor": self.anchor,
            "image_anchor": self.image_anchor(),
            "certified_radius": self.certified_radius,
            "reversed": self.reversed_target,
            "mapping": dict(sorted(self.mapping.items())),
        }


@dataclass(frozen=True)
class BallSignature:
    code: bytes

    def __lt__(self, other):
        return self.code < other.code

    def hex(self):
        # digest, not a code prefix: codes share a long language header
        return hashlib.sha256(self.code).hexdigest()[:16]


@dataclass(frozen=True)
class CensusEntry:
    signature: BallSignature
    multiplicity: int
    representative: str


@dataclass
class CensusTable:
    radius: int
    entries: list
    censused: int

    def signature_set(self):
        return {e.signature for e in self.entries}

    def multiplicity_of(self, sig):
        for e in self.entries:
            if e.signature == sig:
                return e.multiplicity
        return 0

    def representative_of(self, sig):
        for e in self.entries:
            if e.signature == sig:
                return e.representative
        return None


@dataclass
class EngineResult:
    """Outcome of a layered pointed-isomorphism search.

    status 'iso': mapping realizes a pointed isomorphism at the requested
    radius. status 'dead': no pointed isomorphism at `radius` (certified on
    faithful layers; monotonicity kills every larger radius too).
    status 'exhausted': an isomorphism exists at `radius`, but the window
    cannot certify the requested radius; mapping witnesses the alive state.
    """

    status: str
    radius: int
    mapping: dict | None = None


def _grow_layers(view, center, limit):
    dist = {center: 0}
    layers = [[center]]
    frontier = [center]
    for level in range(1, limit + 1):
        nxt = []
        for u in frontier:
            for v in view.adj(u):
                if v not in dist:
                    dist[v] = level
                    nxt.append(v)
        if not nxt:
            break
        nxt.sort()
        layers.append(nxt)
        frontier = nxt
    return layers, dist


def _layer_summary(view, layer, dist, level):
    """Set-level invariants of one layer: profiles and finished tuples.

    A tuple is counted at the level where its farthest argument lives; it is
    attributed once, via its lexicographically least farthest argument.
    """
    profiles = Counter(view.unary_profile(u) for u in layer)
    tuples = Counter()
    for u in layer:
        for sym, t in view.incident(u):
            farthest = None
            ok = True
            for x in t:
                dx = dist.get(x)
                if dx is None or dx > level:
                    ok = False
                    break
                if dx == level and (farthest is None or x < farthest):
                    farthest = x
            if ok and farthest == u:
                tuples[sym] += 1
    return profiles, tuples


def windowed_pointed_iso(M, a, N, b, target_radius, reverse=False):
    """Search for a pointed isomorphism (B_M(a,r),a) -> (B_N(b,r),b).

    Works on the parent windows without extracting balls. With reverse=True
    the target side is read with reversed tuple order.
    """
    if M.language != N.language:
        raise LanguageMismatch(M.language, N.language)
    va = View(M)
    vb = View(N, reverse)
    depth_a = M.depth(a)
    depth_b = N.depth(b)
    certifiable = min(depth_a, depth_b, target_radius)
    if certifiable is math.inf:
        certifiable = target_radius
    certifiable = int(certifiable)

    layers_a, dist_a = _grow_layers(va, a, certifiable)
    layers_b, dist_b = _grow_layers(vb, b, certifiable)

    # Set-level prechecks, layer by layer. A mismatch at a faithful layer
    # certifies death at that radius.
    top = max(len(layers_a), len(layers_b))
    for level in range(top):
        la = layers_a[level] if level < len(layers_a) else []
        lb = layers_b[level] if level < len(layers_b) else []
        if len(la) != len(lb):
            return EngineResult("dead", level)
        pa, ta = _layer_summary(va, la, dist_a, level)
        pb, tb = _layer_summary(vb, lb, dist_b, level)
        if pa != pb or ta != tb:
            return EngineResult("dead", level)
    effective = min(certifiable, top - 1)
    if effective < certifiable and len(layers_a) - 1 <= effective:
        # Balls stopped growing inside the window: radius `effective` already
        # determines every larger radius.
        certifiable = target_radius
        stalled = True
    else:
        stalled = False

    order = []
    for level, layer in enumerate(layers_a):
        if level > effective:
            break
        for u in layer:
            order.append((u, level))

    cand_layers = {level: layers_b[level] for level in range(min(effective, len(layers_b) - 1) + 1)}

    fwd = {}
    bwd = {}

    def compatible(u, v):
        if va.unary_profile(u) != vb.unary_profile(v):
            return False
        for sym, t in va.incident(u):
            if all(x == u or x in fwd for x in t):
                image = tuple(v if x == u else fwd[x] for x in t)
                if not vb.has_tuple(sym, image):
                    return False
        for sym, t in vb.incident(v):
            if all(x == v or x in bwd for x in t):
                pre = tuple(u if x == v else bwd[x] for x in t)
                if not va.has_tuple(sym, pre):
                    return False
        return True

    # Iterative DFS over layer-respecting assignments. completed_layers
    # tracks the deepest layer fully assigned on any branch; finishing layer
    # L certifies an isomorphism at radius L.
    n = len(order)
    best_complete = -1
    layer_end = {}
    for idx, (u, level) in enumerate(order):
        layer_end[idx] = level if idx + 1 == n or order[idx + 1][1] != level else None

    iters = [None] * (n + 1)
    idx = 0
    iters[0] = iter(cand_layers[0]) if n else iter(())
    chosen = [None] * n
    found = None
    while idx >= 0:
        u, level = order[idx] if idx < n else (None, None)
        if idx == n:
            found = dict(fwd)
            break
        advanced = False
        for v in iters[idx]:
            if v in bwd:
                continue
            if compatible(u, v):
                fwd[u] = v
                bwd[v] = u
                chosen[idx] = v
                if layer_end[idx] is not None and layer_end[idx] > best_complete:
                    best_complete = layer_end[idx]
                idx += 1
                if idx < n:
                    iters[idx] = iter(cand_layers[order[idx][1]])
                else:
                    iters[idx] = iter(())
                advanced = True
                break
        if advanced:
            if idx == n:
                found = dict(fwd)
                break
            continue
        idx -= 1
        if idx >= 0:
            v = chosen[idx]
            u, _ = order[idx]
            del fwd[u]
            del bwd[v]
            chosen[idx] = None

    if found is not None:
        certified = target_radius if (stalled or effective >= target_radius) else effective
        if certified >= target_radius:
            return EngineResult("iso", target_radius, found)
        return EngineResult("exhausted", effective, found)
    # DFS exhausted: no isomorphism at best_complete + 1, which is within the
    # faithful region by construction.
    return EngineResult("dead", best_complete + 1)


def pointed_iso(A, B):
    """Center-preserving isomorphism between two pointed balls, or None."""
    if A.structure.language != B.structure.language:
        raise LanguageMismatch(A.structure.language, B.structure.language)
    if len(A.structure) != len(B.structure):
        return None
    limit = max(len(A.structure), 1)
    res = windowed_pointed_iso(A.structure, A.center, B.structure, B.center, limit)
    if res.status == "dead":
        return None
    if res.status != "iso":
        raise InvariantViolation("closed-window", "ball search exhausted on closed windows")
    if len(res.mapping) != len(A.structure):
        raise InvariantViolation(
            "ball-connected", "pointed ball has elements unreachable from its center"
        )
    iso = PartialIso(
        source=A.structure,
        target=B.structure,
        mapping=res.mapping,
        anchor=A.center,
        certified_radius=A.radius,
    )
    iso.verify()
    return iso


# ---------------------------------------------------------------------------
# Canonical signatures.


def _refine(colors, elements, incident_of):
    """One round of color refinement; returns (new_colors, changed)."""
    keys = {}
    for u in elements:
        summary = []
        for sym, t in incident_of(u):
            summary.append((sym, tuple(i for i, x in enumerate(t) if x == u), tuple(colors[x] for x in t)))
        summary.sort()
        keys[u] = (colors[u], tuple(summary))
    ordered = sorted(set(keys.values()))
    remap = {k: i for i, k in enumerate(ordered)}
    new_colors = {u: remap[keys[u]] for u in elements}
    changed = any(new_colors[u] != colors[u] for u in elements) or len(ordered) != len(
        set(colors.values())
    )
    return new_colors, changed


def _refine_to_stable(colors, elements, incident_of):
    while True:
        colors, changed = _refine(colors, elements, incident_of)
        if not changed:
            return colors
        if len(set(colors.values())) == len(elements):
            return colors


def _serialize(structure, labeling):
    parts = [repr(structure.language._key).encode()]
    parts.append(str(len(structure.elements)).encode())
    for name, _ in structure.language.symbols:
        rows = sorted(
            tuple(labeling[x] for x in t) for t in structure.tuples_by_symbol[name]
        )
        parts.append((name + ":" + repr(rows)).encode())
    return b"|".join(parts)


def signature(A):
    """Canonical code: equal codes iff pointed-isomorphic.

    Individualization-refinement with the center pinned and BFS distance
    seeded into the initial colors (both are pointed-isomorphism
    invariants). The canonical form is the minimum serialization over the
    refined labeling search tree.
    """
    S = A.structure
    elements = S.elements
    _, dist = _grow_layers(View(S), A.center, len(elements))
    if len(dist) != len(elements):
        raise InvariantViolation(
            "ball-connected", "pointed ball has elements unreachable from its center"
        )
    incident_of = S.incident

    init = {}
    seed = sorted({(dist[u], S.unary_profile(u)) for u in elements})
    seed_id = {k: i for i, k in enumerate(seed)}
    for u in elements:
        init[u] = seed_id[(dist[u], S.unary_profile(u))]

    best = [None]

    def descend(colors):
        colors = _refine_to_stable(colors, elements, incident_of)
        cells = {}
        for u in elements:
            cells.setdefault(colors[u], []).append(u)
        if len(cells) == len(elements):
            labeling = {u: colors[u] for u in elements}
            code = _serialize(S, labeling)
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        target_color = min(c for c, cell in cells.items() if len(cell) > 1)
        cell = sorted(cells[target_color])
        fresh = len(elements) + 1
        for u in cell:
            branched = dict(colors)
            branched[u] = fresh
            descend(branched)

    descend(init)
    return BallSignature(best[0])


# ---------------------------------------------------------------------------
# Census.


def _linear_layout(M):
    """Positions along a directed path or cycle, if M is one.

    Applicable when the language has exactly one binary symbol, nothing of
    higher arity, and that symbol forms a simple path or cycle covering all
    elements. Returns (kind, order) with kind in {'path', 'cycle'} or None.
    """
    binaries = [n for n, a in M.language.symbols if a == 2]
    if len(binaries) != 1 or any(a > 2 for _, a in M.language.symbols):
        return None
    sym = binaries[0]
    succ = {}
    pred = {}
    for x, y in M.tuples_by_symbol[sym]:
        if x == y or x in succ or y in pred:
            return None
        succ[x] = y
        pred[y] = x
    n = len(M.elements)
    if not M.elements:
        return None
    heads = [e for e in M.elements if e not in pred]
    if len(heads) == 1:
        order = [heads[0]]
        while order[-1] in succ:
            order.append(succ[order[-1]])
            if len(order) > n:
                return None
        if len(order) != n:
            return None
        return "path", order
    if not heads and len(M.tuples_by_symbol[sym]) == n:
        start = M.elements[0]
        order = [start]
        while True:
            nxt = succ.get(order[-1])
            if nxt is None or len(order) > n:
                return None
            if nxt == start:
                break
            order.append(nxt)
        if len(order) != n:
            return None
        return "cycle", order
    return None


def _profile_char(M, e):
    bits = 0
    for i, flag in enumerate(M.unary_profile(e)):
        bits |= flag << i
    return chr(48 + bits)


def _forest_layout(M):
    """Parent map of a uniform labeled forest, if M is one.

    Applicable when all symbols are binary (no colors), every element is the
    child slot (position 2) of at most one tuple, every (element, symbol)
    pair parents at most one child, and every element of depth >= 1 has
    exactly one parent and one child per symbol. Then the pointed h-ball of
    a faithful element is determined exactly by its upward label word.
    """
    if not M.language.symbols or M.language.unary_symbols:
        return None
    if any(a != 2 for _, a in M.language.symbols):
        return None
    parent = {}
    child_slots = set()
    for si, (name, _) in enumerate(M.language.symbols):
        for p, c in M.tuples_by_symbol[name]:
            if c in parent:
                return None
            parent[c] = (p, si)
            if (p, si) in child_slots:
                return None
            child_slots.add((p, si))
    depths = M.depths()
    k = len(M.language.symbols)
    for e in M.elements:
        if depths[e] >= 1:
            if e not in parent:
                return None
            for si in range(k):
                if (e, si) not in child_slots:
                    return None
    return parent


def _forest_class_keys(M, h, parent, extended=False):
    """Upward label words of length h.

    With extended=True the word is read for every element owning h
    in-window ancestors, not just faithful ones: in a uniform labeled
    forest the true h-class is a function of the word alone, and window
    faithfulness guarantees visible ancestor paths are true paths.
    """
    depths = M.depths()
    keys = {}
    for e in M.elements:
        if not extended and depths[e] < h:
            continue
        labels = []
        cur = e
        ok = True
        for _ in range(h):
            hop = parent.get(cur)
            if hop is None:
                ok = False
                break
            p, si = hop
            labels.append(si)
            cur = p
        if ok:
            keys[e] = tuple(labels)
    return keys


def class_ids(M, h, extended=False):
    """Exact pointed-ball class tokens.

    Equal tokens iff the pointed h-balls are isomorphic. By default tokens
    cover exactly the faithful elements (depth >= h). With extended=True,
    fast layouts may certify tokens past the faithful region (a forest
    window decides classes from ancestor words alone); the generic fallback
    stays depth-bounded. Tokens are comparable within one call; use
    signatures to compare across structures.
    """
    depths = M.depths()
    members = [e for e in M.elements if depths[e] >= h]
    layout = _linear_layout(M)
    if layout is not None:
        keys = _linear_class_keys(M, h, *layout)
        return {e: ("lin", keys[e]) for e in members}
    parent = _forest_layout(M)
    if parent is not None:
        keys = _forest_class_keys(M, h, parent, extended=extended)
        if not extended:
            keys = {e: keys[e] for e in members}
        return {e: ("forest", k) for e, k in keys.items()}
    return {e: signature(M.ball(e, h)) for e in members}


def class_groups(M, h):
    """Members of each pointed h-ball class, as sorted member lists."""
    groups = {}
    for e, token in class_ids(M, h).items():
        groups.setdefault(token, []).append(e)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def _linear_class_keys(M, h, kind, order):
    """Exact h-class keys for censusable elements of a path/cycle window."""
    word = "".join(_profile_char(M, e) for e in order)
    n = len(order)
    depths = M.depths()
    keys = {}
    if kind == "path":
        for i, e in enumerate(order):
            if depths[e] < h:
                continue
            lo = max(0, i - h)
            hi = min(n - 1, i + h)
            keys[e] = (i - lo, word[lo : hi + 1])
    else:
        doubled = word + word
        for i, e in enumerate(order):
            if depths[e] < h:
                continue
            if 2 * h + 1 >= n:
                keys[e] = ("wrap", doubled[i : i + n])
            else:
                start = (i - h) % n
                keys[e] = (h, doubled[start : start + 2 * h + 1])
    return keys


def census(M, h):
    """Isomorphism classes of (B(v,h), v) over all v with depth(v) >= h."""
    h = int(h)
    groups = class_groups(M, h)
    if not groups:
        raise NoFaithfulElements(h)
    # Class tokens are exact, so one signature per group suffices; merge by
    # signature defensively anyway so the table is keyed purely by it.
    merged = {}
    for members in groups:
        rep = members[0]
        sig = signature(M.ball(rep, h))
        if sig in merged:
            old_mult, old_rep = merged[sig]
            merged[sig] = (old_mult + len(members), min(old_rep, rep))
        else:
            merged[sig] = (len(members), rep)
    table = [CensusEntry(sig, m, r) for sig, (m, r) in merged.items()]
    table.sort(key=lambda e: e.signature.code)
    return CensusTable(radius=h, entries=table, censused=sum(len(g) for g in groups))


# ---------------------------------------------------------------------------
# Local isomorphism property.


@dataclass
class LipReport:
    radius: int
    verdict: str  # holds_up_to_bounds | fails_with_witness
    k: int | None
    per_class: list  # (signature, representative, k_c or None)
    witness: tuple | None  # (signature, representative, violating element)
    window_bound: int

    def summary(self):
        if self.verdict == "holds_up_to_bounds":
            return f"LIP holds at h={self.radius} with k={self.k} (window bound {self.window_bound})"
        return f"LIP fails at h={self.radius}: witness {self.witness}"


def lip_check(M, h):
    """Least k such that every faithful k-ball contains every h-class.

    A class whose required k scales past half the window depth is reported
    as a failure with a witness element: no window-independent constant is
    compatible with the observed recurrence gap.
    """
    groups = class_groups(M, h)
    if not groups:
        raise WindowExhausted(f"no faithful elements at radius {h}")
    depths = M.depths()
    adj = M.adjacency()
    finite_depths = [d for d in depths.values() if d is not math.inf]
    closed = not finite_depths
    if closed:
        window_bound = len(M.elements)
        k_cap = window_bound
    else:
        window_bound = int(max(finite_depths))
        k_cap = window_bound // 2

    per_class = []
    worst_k = 0
    witness = None
    for members in groups:
        rep = members[0]
        # Multi-source BFS distance to the nearest class member.
        dist = {e: math.inf for e in M.elements}
        queue = deque()
        for m in members:
            dist[m] = 0
            queue.append(m)
        while queue:
            u = queue.popleft()
            d = dist[u] + 1
            for v in adj[u]:
                if dist[v] > d:
                    dist[v] = d
                    queue.append(v)
        sig = signature(M.ball(rep, h))
        if closed:
            k_c = max(dist[e] for e in M.elements)
            if k_c is math.inf:
                k_c = None  # disconnected window: class unreachable somewhere
        else:
            # f(k) = max distance-to-class over elements of depth >= k is
            # non-increasing; find the least k with f(k) <= k.
            buckets = {}
            for e in M.elements:
                d = depths[e]
                if d is math.inf:
                    continue
                d = int(min(d, window_bound))
                buckets.setdefault(d, []).append(e)
            f = [0] * (window_bound + 1)
            running = 0
            for k in range(window_bound, -1, -1):
                for e in buckets.get(k, ()):
                    if dist[e] > running:
                        running = dist[e]
                f[k] = running
            k_c = None
            for k in range(0, window_bound + 1):
                if f[k] <= k:
                    k_c = k
                    break
        if k_c is None or k_c > k_cap:
            if witness is None:
                probe = k_cap if not closed else window_bound
                bad = None
                for e in sorted(M.elements):
                    d = depths[e]
                    if d is not math.inf and d < probe:
                        continue
                    if dist[e] > probe:
                        bad = e
                        break
                witness = (sig, rep, bad)
            per_class.append((sig, rep, None))
        else:
            per_class.append((sig, rep, k_c))
            worst_k = max(worst_k, k_c)

    if witness is not None:
        return LipReport(h, "fails_with_witness", None, per_class, witness, window_bound)
    return LipReport(h, "holds_up_to_bounds", worst_k, per_class, None, window_bound)


# ---------------------------------------------------------------------------
# Extraction preorder.


@dataclass
class CompareReport:
    radius: int
    forward: bool  # every M-class present in N
    backward: bool
    missing_in_target: list  # witnesses for M !< N
    missing_in_source: list
    multiplicities: dict  # signature hex -> (mult in M, mult in N)
    censused: tuple

    def locally_isomorphic(self):
        return self.forward and self.backward


def extraction_compare(M, N, h):
    """Class-presence comparison of h-ball censuses, both directions.

    Multiplicities are reported for information only: finite windows distort
    counts, so the verdict uses class presence (the connected-structure
    form).
    """
    if M.language != N.language:
        raise LanguageMismatch(M.language, N.language)
    tm = census(M, h)
    tn = census(N, h)
    sm = {e.signature: e for e in tm.entries}
    sn = {e.signature: e for e in tn.entries}
    missing_fwd = [
        (sig.hex(), sm[sig].representative) for sig in sm if sig not in sn
    ]
    missing_bwd = [
        (sig.hex(), sn[sig].representative) for sig in sn if sig not in sm
    ]
    mults = {}
    for sig in set(sm) | set(sn):
        mults[sig.hex()] = (
            sm[sig].multiplicity if sig in sm else 0,
            sn[sig].multiplicity if sig in sn else 0,
        )
    return CompareReport(
        radius=h,
        forward=not missing_fwd,
        backward=not missing_bwd,
        missing_in_target=sorted(missing_fwd),
        missing_in_source=sorted(missing_bwd),
        multiplicities=dict(sorted(mults.items())),
        censused=(tm.censused, tn.censused),
    )
