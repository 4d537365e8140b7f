"""
Anchored symmetry search on column colorings
============================================

A symmetry approximant is a verified partial isomorphism moving the anchor a
bounded distance, certified out to a requested radius. For the sqrt(2)
column coloring the search separates intercepts with an exact mirror from
intercepts without one.
"""

from locis.generators import QuadraticIrrational, gen_sturmian
from locis.symmetry import find_symmetries

r = QuadraticIrrational.parse("(0+1*sqrt(2))/1")

# s = 0 places a mirror at the origin; s = 1/4 does not, and every candidate
# dies at a small radius.
for text in ("0", "(0+1*sqrt(2))/2", "1/2", "1/4"):
    M = gen_sturmian(r, QuadraticIrrational.parse(text), 300)
    rep = find_symmetries(M, displacement=4, radius=50, anchor="0")
    line = f"s = {text:16s} -> {rep.verdict}"
    if rep.verdict == "found":
        kinds = []
        if rep.translations():
            kinds.append("translations")
        if rep.reversals():
            kinds.append("reversals")
        line += "  (" + ", ".join(kinds) + ")"
    else:
        kills = [rad for _, _, out, rad in rep.candidates if out == "dead"]
        line += f"  (all candidates dead by radius {max(kills)})"
    print(line)

# The certificate is a checkable object, not a yes/no flag.
M = gen_sturmian(r, QuadraticIrrational.parse("0"), 300)
rep = find_symmetries(M, displacement=4, radius=50, anchor="0")
p = rep.reversals()[0]
p.verify()
print("\nmirror:", p.anchor, "->", p.image_anchor(),
      "reversed:", p.reversed_target,
      "certified radius:", p.certified_radius,
      "mapped elements:", len(p.mapping))
