"""
Rigidity checks and the re-anchoring trace
==========================================

An aperiodic window cannot keep two interchangeable deep elements: at every
radius r, either some r-ball pair is separated by a larger ball (the window
looks rigid at that scale), or a verified symmetry approximant shows up.
The re-anchoring trace makes the rigid case constructive: it walks to ever
deeper anchors whose neighborhoods determine each other, doubling the scale
at every step, and re-verifies the whole chain afterwards.
"""

from locis.errors import CharacterizationFails
from locis.generators import QuadraticIrrational, gen_grid, gen_sturmian
from locis.rigidity import rigid_limit, rigidity_characterization

r = QuadraticIrrational.parse("(0+1*sqrt(2))/1")
M = gen_sturmian(r, QuadraticIrrational.parse("0"), 4000)

rep = rigidity_characterization(M, radii=[1, 2, 3], s=12)
print("characterization:", rep.verdict)
for radius, outcome, payload in rep.per_radius:
    print(f"  r={radius}: {outcome}")

# The trace: each step separates the current anchor's class at a doubled
# radius and links the old anchor to the new one by a verified isomorphism.
trace = rigid_limit(M, steps=2, seed="0")
print("\nre-anchoring from 0:")
for st in trace.steps:
    print(f"  anchor {st.anchor:>6s}  scale (r={st.r}, s={st.s})"
          f"  window {len(st.window)}")
print("post-verification:", trace.verification)

# On a periodic window the separation search must fail: every element keeps
# an indistinguishable twin at bounded distance, at every scale.
striped = gen_grid((400,), mode="window", periods=(2,),
                   colormap={(0,): "White", (1,): "Black"})
try:
    rigid_limit(striped, steps=1, seed="200")
except CharacterizationFails as exc:
    print("\nperiodic window rejected at stage:", exc.stage)
