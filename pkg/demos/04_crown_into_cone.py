"""Include the crown into the cone over it and watch the loop degree die.

The crown has a non-contractible square; in the cone the apex fills it in,
so the induced algebra map sends a degree that generates an infinite
cyclic group to the trivial degree and cannot be faithful.
"""

from gradednets.net_algebras import example_scenario

rep = example_scenario()
for line in rep.lines():
    print(line)
for key, value in rep.data.items():
    print(f"{key}: {value}")
print("all checks passed" if rep.ok else "FAILURES above")
