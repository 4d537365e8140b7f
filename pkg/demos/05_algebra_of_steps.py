"""
Words of functional steps and their laws
========================================

When every binary symbol acts like a partial function in both directions,
composable steps form words that can be tested for algebraic laws: whether
ball type determines the effect of a word (equational), whether words
commute, and whether a word that fixes one deep element fixes them all
(regular). A quotient by a verified translation group folds a closed window
onto its fundamental domain.
"""

from locis.algebra import (
    Word,
    apply_word,
    equational_check,
    quotient,
    step_vocabulary,
    strong_commutativity_check,
    strong_regularity_check,
)
from locis.generators import (
    QuadraticIrrational,
    gen_cayley_free,
    gen_grid,
    gen_kary_tree,
    gen_sturmian,
    AddressSequence,
)

# The step vocabulary is read off the language: one step per direction of
# each binary symbol.
torus = gen_grid((8, 8), mode="torus")
print("steps on the grid:", [str(s) for s in step_vocabulary(torus.language)])

w = Word.parse("E1:1>2,E2:1>2,E1:2>1")
print("applying", w, "to 0_0 gives", apply_word(torus, "0_0", w))

# Grids satisfy all three laws; the free group fails commutativity with a
# short witness, checked by applying both orders.
print("\ngrid commutativity:", strong_commutativity_check(torus, 6).holds)
print("grid regularity:  ", strong_regularity_check([torus], 6).holds)

cayley = gen_cayley_free(2, 6)
rep = strong_commutativity_check(cayley, 4)
x, v, w = rep.witness
print("free group commutativity:", rep.holds,
      f" witness at {x}: {v} then {w} differs from {w} then {v}")
print("  ", apply_word(cayley, x, v + w), "!=", apply_word(cayley, x, w + v))

# Colored columns and trees are equational: the 1-ball type of an element
# already determines where each step sends it.
col = gen_sturmian(QuadraticIrrational.parse("(0+1*sqrt(2))/1"),
                   QuadraticIrrational.parse("0"), 200)
tree = gen_kary_tree(2, AddressSequence.parse("tm12"), 100, halo=8)
print("\nequational: column", equational_check(col).holds,
      " tree", equational_check(tree).holds)

# Quotient of a 12-cycle by the rotation subgroup generated by +4.
C12 = gen_grid((12,), mode="torus")
res = quotient(C12, [{str(i): str((i + 4) % 12) for i in range(12)}])
print("\n12-cycle / <rotation by 4>: group size", res.group_size,
      "-> quotient on", len(res.structure), "orbits")
print("surjection:", dict(sorted(res.surjection.items(), key=lambda kv: int(kv[0]))))
