"""Acceptance gate: ten numbered end-to-end checks at pinned sizes.

Run with -v to get one pass/fail line per criterion. Tolerances and bounds
are stated inline; the two expensive builds (a 10^4-wide comparison sweep
and a 10^5-wide re-anchoring trace) carry explicit wall-clock budgets.
"""

import math
import random
import time

import pytest

from locis.algebra import (
    Word,
    apply_word,
    equational_check,
    quotient,
    step_vocabulary,
    strong_commutativity_check,
    strong_regularity_check,
)
from locis.errors import CharacterizationFails
from locis.generators import (
    AddressSequence,
    QuadraticIrrational,
    checkerboard_colormap,
    gen_binary_hyperbolic,
    gen_cayley_free,
    gen_grid,
    gen_kary_tree,
    gen_sturmian,
)
from locis.iso import PartialIso, extraction_compare, pointed_iso, signature
from locis.rigidity import rigid_limit, rigidity_characterization
from locis.symmetry import (
    detect_periodicity,
    extend_to_automorphism,
    find_symmetries,
    periodic_isomorphism,
)

from conftest import (
    brute_pointed_canonical,
    enumerate_closed_structures,
    random_closed_structure,
)

SQRT2 = QuadraticIrrational.parse("(0+1*sqrt(2))/1")


def intercepts(*texts):
    return [QuadraticIrrational.parse(t) for t in texts]


@pytest.fixture(scope="module")
def wide_columns():
    """Half-width 10^4 windows of the sqrt(2) column coloring."""
    return {t: gen_sturmian(SQRT2, s, 10_000)
            for t, s in zip(("0", "1/3", "1/4"), intercepts("0", "1/3", "1/4"))}


def test_criterion_01_wide_columns_pairwise_equivalent_to_radius_8(wide_columns):
    t0 = time.monotonic()
    names = sorted(wide_columns)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            for h in range(1, 9):
                rep = extraction_compare(wide_columns[a], wide_columns[b], h)
                assert rep.forward and rep.backward, (a, b, h)
    assert time.monotonic() - t0 < 60.0


def test_criterion_02_mirror_trichotomy_is_exact_at_radius_50():
    expected = {"0": True, "(0+1*sqrt(2))/2": True, "1/2": True, "1/4": False}
    for text, has_mirror in expected.items():
        M = gen_sturmian(SQRT2, QuadraticIrrational.parse(text), 300)
        rep = find_symmetries(M, 4, 50, anchor="0")
        if has_mirror:
            assert rep.verdict == "found", text
            assert rep.reversals(), text
            for p in rep.found:
                p.verify()
        else:
            assert rep.verdict == "none_found", text
            assert all(rad <= 50 for _, _, out, rad in rep.candidates
                       if out == "dead")


def test_criterion_03_black_cell_frequency_within_percent_of_slope_fraction(wide_columns):
    M = wide_columns["0"]
    n = 10_000
    black = sum(1 for i in range(-n, n + 1) if M.has_tuple("Black", (str(i),)))
    assert abs(black / (2 * n + 1) - (math.sqrt(2) - 1)) < 0.01


def test_criterion_04_deep_tree_symmetry_dichotomy_and_characterization():
    periodic = gen_kary_tree(2, AddressSequence.parse("periodic:122"), 2000, halo=14)
    rep = find_symmetries(periodic, 3, 50)
    assert rep.verdict == "found"
    for p in rep.found:
        p.verify()

    tm = gen_kary_tree(2, AddressSequence.parse("tm12"), 2000, halo=14)
    rep = find_symmetries(tm, 8, 50)
    assert rep.verdict == "none_found"
    kills = [rad for _, _, out, rad in rep.candidates if out == "dead"]
    assert kills and max(kills) <= 13

    char = rigidity_characterization(tm, [1, 2, 3, 4], 20)
    assert char.verdict == "characterization_holds_up_to_bounds"


def test_criterion_05_tiling_symmetry_dichotomy_at_40_levels():
    per = gen_binary_hyperbolic(AddressSequence.parse("periodic:01"), 40, 64,
                                support_radius=10)
    rep = find_symmetries(per, 4, 12)
    assert rep.verdict == "found"
    for p in rep.found:
        p.verify()

    tm = gen_binary_hyperbolic(AddressSequence.parse("tm"), 40, 64,
                               support_radius=10)
    rep = find_symmetries(tm, 4, 12)
    assert rep.verdict == "none_found"
    kills = [rad for _, _, out, rad in rep.candidates if out == "dead"]
    assert kills and max(kills) <= 10


def test_criterion_06_algebraic_laws_separate_the_families():
    tree = gen_kary_tree(2, AddressSequence.parse("tm12"), 300, halo=14)
    assert equational_check(tree).holds
    column = gen_sturmian(SQRT2, QuadraticIrrational.parse("0"), 300)
    assert equational_check(column).holds

    cayley = gen_cayley_free(2, 6)
    com = strong_commutativity_check(cayley, 4)
    assert not com.holds
    x, v, w = com.witness
    assert len(v) + len(w) <= 4
    a = apply_word(cayley, x, v + w)
    b = apply_word(cayley, x, w + v)
    assert a is not None and b is not None and a != b

    torus = gen_grid((8, 8), mode="torus")
    assert strong_commutativity_check(torus, 6).holds
    assert strong_regularity_check([torus], 6).holds
    # word action agrees with plain coordinate translation
    vocab = step_vocabulary(torus.language)
    rng = random.Random(6)
    for _ in range(200):
        word = Word(tuple(rng.choice(vocab) for _ in range(rng.randrange(0, 7))))
        vec = [0, 0]
        for s in word.steps:
            axis = int(s.symbol[1:]) - 1
            vec[axis] += 1 if (s.i, s.j) == (1, 2) else -1
        x, y = rng.randrange(8), rng.randrange(8)
        assert apply_word(torus, f"{x}_{y}", word) == \
            f"{(x + vec[0]) % 8}_{(y + vec[1]) % 8}"


def test_criterion_07_periods_quotients_and_automorphism_extension():
    periods, cmap = checkerboard_colormap()
    M = gen_grid((8, 8), mode="torus", periods=periods, colormap=cmap)
    rep = detect_periodicity(M, 2)
    assert rep.rank == 2
    assert rep.orbit_cover == "covers_interior"
    for g in rep.generators:
        g.verify()
    # transport chains partition the torus into one orbit per period element
    orbit = {}
    for e in M.elements:
        cur = e
        while rep.transport[cur] is not None:
            cur = rep.transport[cur][0]
        orbit[e] = cur
    assert set(orbit.values()) == set(rep.period)
    counts = {}
    for root in orbit.values():
        counts[root] = counts.get(root, 0) + 1
    assert sorted(counts.values()) == [32, 32]

    C12 = gen_grid((12,), mode="torus")
    res = quotient(C12, [{str(i): str((i + 4) % 12) for i in range(12)}])
    assert res.group_size == 3
    assert len(res.structure) == 4
    C4 = gen_grid((4,), mode="torus")
    anchor = res.structure.elements[0]
    assert pointed_iso(res.structure.ball(anchor, 4), C4.ball("0", 4)) is not None
    assert set(res.surjection.values()) == set(res.structure.elements)
    for a, b in C12.tuples_of("Succ"):
        assert res.structure.has_tuple("Succ", (res.surjection[a], res.surjection[b]))

    shift = {f"{x}_{y}": f"{(x + 2) % 8}_{y}" for x in range(8) for y in range(8)}
    anchor = M.deepest_element()
    seed = PartialIso(M, M, {e: shift[e] for e in M.ball_elements(anchor, 2)},
                      anchor, 2)
    seed.verify()
    out = extend_to_automorphism(M, rep, seed)
    assert out.mapping == shift


def test_criterion_08_re_anchoring_trace_on_a_hundred_thousand_wide_window():
    t0 = time.monotonic()
    M = gen_sturmian(SQRT2, QuadraticIrrational.parse("0"), 100_000)
    trace = rigid_limit(M, 3, "0")
    assert len(trace.steps) == 4  # seed plus three escalations
    scales = [(st.r, st.s) for st in trace.steps]
    assert scales == sorted(set(scales))  # strictly escalating
    assert trace.verification
    assert all(all(flags) for flags in trace.verification.values())
    assert time.monotonic() - t0 < 300.0

    striped = gen_grid((400,), mode="window", periods=(2,),
                       colormap={(0,): "White", (1,): "Black"})
    with pytest.raises(CharacterizationFails):
        rigid_limit(striped, 1, "200")


def test_criterion_09_engine_and_signature_agree_with_allmaps_oracle():
    def component_balls(structures):
        return [M.ball(a, len(M)) for M in structures for a in M.elements]

    # exhaustive over every closed two-symbol structure on <= 2 elements
    balls = component_balls(enumerate_closed_structures(2))
    by_brute = {}
    by_sig = {}
    for ball in balls:
        key = brute_pointed_canonical(ball.structure, ball.center)
        sig = signature(ball)
        by_brute.setdefault(key, set()).add(sig)
        by_sig.setdefault(sig, set()).add(key)
    assert all(len(v) == 1 for v in by_brute.values())
    assert all(len(v) == 1 for v in by_sig.values())

    # seeded random structures on 3..8 elements, checked pairwise
    rng = random.Random(908)
    structs = [random_closed_structure(rng, n) for n in range(3, 9) for _ in range(2)]
    balls = component_balls(structs)
    keys = [brute_pointed_canonical(b.structure, b.center) for b in balls]
    sigs = [signature(b) for b in balls]
    for i in range(len(balls)):
        for j in range(i, len(balls)):
            want = keys[i] == keys[j]
            assert (sigs[i] == sigs[j]) == want
            got = pointed_iso(balls[i], balls[j])
            assert (got is not None) == want
            if got is not None:
                got.verify()


def test_criterion_10_periodic_window_matching_and_period_mismatch_witness():
    periods, cmap = checkerboard_colormap()
    A = gen_grid((10, 10), mode="window", periods=periods, colormap=cmap)
    B = gen_grid((10, 10), mode="window", periods=periods, colormap=cmap,
                 phase=(1, 0))
    p = periodic_isomorphism(A, B)
    assert p is not None
    p.verify()
    assert p.certified_radius >= 9
    for e, img in p.mapping.items():
        assert A.unary_profile(e) == B.unary_profile(img)

    two = gen_grid((60,), mode="window", periods=(2,),
                   colormap={(0,): "White", (1,): "Black"})
    three = gen_grid((60,), mode="window", periods=(3,),
                     colormap={(0,): "White", (1,): "Black", (2,): "Black"})
    assert periodic_isomorphism(two, three) is None
    witness = extraction_compare(two, three, 1)
    assert not witness.locally_isomorphic()
    assert witness.missing_in_target or witness.missing_in_source
