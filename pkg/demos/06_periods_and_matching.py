"""
Period detection and periodic window matching
=============================================

On a window with enough verified translations, the period construction
produces a finite fundamental set, one representative per translation orbit,
together with a transport table that carries every element back to its
representative. A partial isomorphism seeded on a small ball then extends
uniquely along the transport, and two windows of the same periodic structure
match by a certified isomorphism even when their anchors disagree.
"""

from locis.generators import checkerboard_colormap, gen_grid
from locis.iso import PartialIso
from locis.symmetry import (
    detect_periodicity,
    extend_to_automorphism,
    periodic_isomorphism,
)

periods, cmap = checkerboard_colormap()
M = gen_grid((8, 8), mode="torus", periods=periods, colormap=cmap)

rep = detect_periodicity(M, rank_bound=2)
print("checkerboard torus: rank", rep.rank, "cover:", rep.orbit_cover)
print("period set:", rep.period)
print("generators:", [(g.anchor, g.image_anchor()) for g in rep.generators])

# Follow the transport table from a far corner back to its representative.
e = "7_5"
chain = [e]
while rep.transport[e] is not None:
    e = rep.transport[e][0]
    chain.append(e)
print("transport 7_5 ->", " -> ".join(chain))

# A translation seeded on a 2-ball extends to the full torus, exactly.
shift = {f"{x}_{y}": f"{(x + 2) % 8}_{y}" for x in range(8) for y in range(8)}
anchor = M.deepest_element()
seed = PartialIso(M, M, {e: shift[e] for e in M.ball_elements(anchor, 2)},
                  anchor, 2)
out = extend_to_automorphism(M, rep, seed)
print("\nseed of", len(seed.mapping), "pairs extends to", len(out.mapping),
      "pairs; equals the coordinate shift:", out.mapping == shift)

# Open windows of the same periodic coloring, anchored one cell apart.
A = gen_grid((10, 10), mode="window", periods=periods, colormap=cmap)
B = gen_grid((10, 10), mode="window", periods=periods, colormap=cmap,
             phase=(1, 0))
p = periodic_isomorphism(A, B)
print("\nshifted windows match:", p is not None,
      " certified radius:", p.certified_radius)

# Different periods have different 1-ball censuses; no matching exists.
two = gen_grid((60,), mode="window", periods=(2,),
               colormap={(0,): "White", (1,): "Black"})
three = gen_grid((60,), mode="window", periods=(3,),
                 colormap={(0,): "White", (1,): "Black", (2,): "Black"})
print("period 2 vs period 3:", periodic_isomorphism(two, three))
