"""Serialization round-trips and parse failures."""

import pytest

from locis import textio
from locis.core import Language, Structure
from locis.errors import ArityMismatch, DanglingElement, ParseError, UnknownSymbol
from locis.generators import AddressSequence, gen_kary_tree, gen_sturmian

from conftest import mk


def test_roundtrip_small():
    M = mk([("P", ("0", "1")), ("Q", ("1", "2"))], n=3, frontier=("0",))
    assert textio.loads(textio.dumps(M)) == M


def test_dumps_is_canonical():
    a = Structure(
        Language([("E", 2), ("C", 1)]),
        ["b", "a"],
        [("C", ("a",)), ("E", ("b", "a")), ("E", ("a", "b"))],
        frontier=("b",),
    )
    text = textio.dumps(a)
    # canonical: dump of the parse reproduces the text exactly
    assert textio.dumps(textio.loads(text)) == text
    # elements and tuples appear sorted
    assert text.index("\na\n") < text.index("\nb\n")
    assert text.index("E(a,b)") < text.index("E(b,a)")


def test_roundtrip_generated_windows():
    tree = gen_kary_tree(2, AddressSequence.thue_morse(1, 2), depth=6, halo=4)
    stur = gen_sturmian(textio_sqrt2(), 0, 30)
    for M in (tree, stur):
        assert textio.loads(textio.dumps(M)) == M


def textio_sqrt2():
    from locis.generators import QuadraticIrrational

    return QuadraticIrrational.sqrt(2)


def test_save_load(tmp_path):
    M = mk([("P", ("0", "1"))], n=2)
    p = tmp_path / "w.locis"
    textio.save(M, p)
    assert textio.load(p) == M


def test_comments_and_blank_lines_ignored():
    M = mk([("P", ("0", "1"))], n=2, frontier=("1",))
    lines = textio.dumps(M).splitlines()
    noisy = [lines[0], "# a comment", ""] + lines[1:] + ["  ", "# end"]
    assert textio.loads("\n".join(noisy)) == M


@pytest.mark.parametrize(
    "mutate",
    [
        lambda t: t.replace("%locis structure v1", "%locis structure v2"),
        lambda t: t.replace("P/2", "P/two"),
        lambda t: t.replace("tuples:", "relations:"),
        lambda t: "\n".join(t.splitlines()[1:]),  # missing header
        lambda t: t.replace("P(0,1)", "P(0,1"),   # unbalanced parens
        lambda t: "",
    ],
)
def test_malformed_documents_raise_parse_error(mutate):
    M = mk([("P", ("0", "1"))], n=2)
    with pytest.raises(ParseError):
        textio.loads(mutate(textio.dumps(M)))


@pytest.mark.parametrize(
    "suffix, exc",
    [
        ("P(0)", ArityMismatch),       # wrong tuple width
        ("Q(9,9)", DanglingElement),   # unknown element ids
        ("R(0,1)", UnknownSymbol),     # symbol not in the language
    ],
)
def test_semantic_errors_surface_as_core_exceptions(suffix, exc):
    # Syntactically fine documents that violate structure invariants raise
    # the structured core exceptions, not ParseError.
    M = mk([("P", ("0", "1"))], n=2)
    with pytest.raises(exc):
        textio.loads(textio.dumps(M) + suffix + "\n")
