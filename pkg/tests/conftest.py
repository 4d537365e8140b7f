"""Shared builders and independent oracles.

The oracles here are deliberately naive: brute-force enumeration over all
maps, BFS by hand over shared-tuple adjacency. They exist so that the
library's engines are checked against something with no shared code.
"""

import itertools

import pytest

from locis.core import Language, Structure

LANG2 = Language([("P", 2), ("Q", 2)])


def mk(tuples, n=None, frontier=(), language=LANG2):
    """Small closed structure over `language` with elements 0..n-1."""
    if n is None:
        n = 0
        for _, args in tuples:
            for a in args:
                n = max(n, int(a) + 1)
    return Structure(
        language,
        [str(i) for i in range(n)],
        tuples,
        frontier=frontier,
    )


def bfs_ball(M, center, h):
    """Ball elements by direct BFS over shared-tuple adjacency."""
    seen = {center: 0}
    frontier = [center]
    for d in range(1, h + 1):
        nxt = []
        for u in frontier:
            for name, _ in M.language.symbols:
                for t in M.tuples_by_symbol[name]:
                    if u in t:
                        for v in t:
                            if v not in seen:
                                seen[v] = d
                                nxt.append(v)
        frontier = nxt
    return set(seen)


def brute_force_pointed_iso(A, a, B, b):
    """Try every bijection with a -> b; True iff one preserves all tuples
    in both directions. Exponential; only for tiny closed structures."""
    ea, eb = list(A.elements), list(B.elements)
    if len(ea) != len(eb):
        return False
    rest_a = [e for e in ea if e != a]
    rest_b = [e for e in eb if e != b]
    for perm in itertools.permutations(rest_b):
        f = {a: b}
        f.update(zip(rest_a, perm))
        ok = True
        for name, _ in A.language.symbols:
            fwd = {tuple(f[x] for x in t) for t in A.tuples_by_symbol[name]}
            if fwd != set(B.tuples_by_symbol[name]):
                ok = False
                break
        if ok:
            return True
    return False


def brute_pointed_canonical(M, a):
    """Canonical form of (M, a) by trying every relabeling that pins a to 0.

    Two pointed structures are isomorphic iff these keys are equal, by
    construction: the key is the minimum serialized form over all maps.
    """
    others = [e for e in M.elements if e != a]
    best = None
    for perm in itertools.permutations(range(1, len(M.elements))):
        relab = {a: 0}
        relab.update(zip(others, perm))
        key = tuple(
            sorted(
                (name, tuple(relab[x] for x in t))
                for name, t in M.all_tuples()
            )
        )
        if best is None or key < best:
            best = key
    return (len(M.elements), best)


def enumerate_closed_structures(n_max=2):
    """Every closed structure over {P/2, Q/2} with at most n_max elements."""
    out = []
    for n in range(1, n_max + 1):
        elements = [str(i) for i in range(n)]
        pairs = list(itertools.product(elements, repeat=2))
        slots = [(sym, p) for sym in ("P", "Q") for p in pairs]
        for mask in range(1 << len(slots)):
            tuples = [slots[i] for i in range(len(slots)) if mask >> i & 1]
            out.append(Structure(LANG2, elements, tuples))
    return out


def random_closed_structure(rng, n):
    """Seeded random closed structure over {P/2, Q/2} on n elements."""
    elements = [str(i) for i in range(n)]
    tuples = []
    m = rng.randrange(0, 3 * n)
    for _ in range(m):
        sym = rng.choice(("P", "Q"))
        tuples.append((sym, (rng.choice(elements), rng.choice(elements))))
    return Structure(LANG2, elements, tuples)


@pytest.fixture(scope="session")
def sqrt2():
    from locis.generators import QuadraticIrrational

    return QuadraticIrrational.parse("(0+1*sqrt(2))/1")
