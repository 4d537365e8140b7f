"""
Address chains in trees and a hyperbolic tiling
===============================================

Both families hang a window on an infinite address: a branch through the
k-ary tree, or a column of tiles in the binary tiling of the hyperbolic
plane. A periodic address yields a translation along the chain; an aperiodic
one provably has none, and the search certifies the dichotomy by killing
every candidate at a small radius.
"""

from locis.generators import AddressSequence, gen_binary_hyperbolic, gen_kary_tree
from locis.symmetry import find_symmetries

# Binary tree, address by the chain of child labels.
for text, disp in (("periodic:122", 3), ("tm12", 8)):
    addr = AddressSequence.parse(text)
    M = gen_kary_tree(2, addr, depth=400, halo=10)
    rep = find_symmetries(M, displacement=disp, radius=50)
    print(f"tree   {addr.describe():14s} displacement {disp}: {rep.verdict}")

# The same dichotomy in the binary tiling: one level down happens to look
# like a shift of the address, so a periodic address gives a vertical
# translation and an aperiodic one cannot.
for text in ("periodic:01", "tm"):
    addr = AddressSequence.parse(text)
    M = gen_binary_hyperbolic(addr, levels=30, half_width=64, support_radius=8)
    rep = find_symmetries(M, displacement=4, radius=12)
    print(f"tiling {addr.describe():14s} displacement 4: {rep.verdict}")

# The killed candidates carry the radius at which they died; aperiodicity
# is certified by these finite certificates, not by exhaustion.
M = gen_kary_tree(2, AddressSequence.parse("tm12"), depth=400, halo=10)
rep = find_symmetries(M, displacement=8, radius=50)
kills = sorted(rad for _, _, out, rad in rep.candidates if out == "dead")
print("\naperiodic tree: every candidate dead, kill radii", kills[:8], "...",
      "max", kills[-1])
