"""
Windows, depths, and faithful balls
===================================

A window is a finite piece of an infinite structure. Elements near the cut
are marked as frontier; the depth of an element is its distance to the
nearest frontier element and bounds the radius at which a ball around it is
faithful to the infinite original.
"""

from locis.core import Language, Structure
from locis import textio

# A short path with colored vertices. The endpoints are frontier: the path
# continues past them in the structure this window was cut from.
lang = Language([("Succ", 2), ("White", 1), ("Black", 1)])
n = 9
tuples = [("Succ", (str(i), str(i + 1))) for i in range(n - 1)]
tuples += [("Black" if i % 3 == 0 else "White", (str(i),)) for i in range(n)]
M = Structure(lang, [str(i) for i in range(n)], tuples, frontier=("0", str(n - 1)))

print(M)
print("depths:", {e: M.depth(e) for e in M.elements})
print("deepest element:", M.deepest_element(), "at depth", M.max_depth())

# Balls are only extracted where they are faithful. The center of the path
# supports radius 4; an element at depth 2 does not.
center = M.deepest_element()
ball = M.ball(center, 3)
print("\n3-ball around", center, "has", len(ball.structure), "elements")
print("extracted balls are closed:", ball.structure.is_closed())

try:
    M.ball("1", 3)
except Exception as exc:
    print("ball('1', 3) rejected:", exc)

# Windows round-trip through a plain text format.
text = textio.dumps(M)
print("\nserialized form:")
print(text)
assert textio.loads(text).content_key() == M.content_key()
