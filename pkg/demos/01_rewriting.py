"""Normal forms of paths on a crown, and what breaks on a bowtie tower.

Run with ``python3 demos/01_rewriting.py``.
"""

from gradednets.io import load_poset
from gradednets.paths import Verdict, check_confluence, equivalent, parse_path, reduce

crown, _ = load_poset("crown2.json")
print("crown2 elements:", crown.elements)

# Going up and straight back down is trivial.
p = parse_path(crown, "d(a1,b1)*u(b1,a1)")
print(f"{p}  reduces to  {reduce(crown, p)}")

# The square around the crown does not reduce.
loop = parse_path(crown, "d(a1,b2)*u(b2,a2)*d(a2,b1)*u(b1,a1)")
print(f"{loop}  is already irreducible: {reduce(crown, loop) == loop}")
print("square vs identity:", equivalent(crown, loop, parse_path(crown, "i(a1)")))

cert = check_confluence(crown)
print(f"crown2: {len(cert.critical_pairs)} critical pairs, certified={cert.certified}")

tower, _ = load_poset("bowtie_tower.json")
cert = check_confluence(tower)
print(f"bowtie_tower: certified={cert.certified}")
for w in cert.witnesses[:1]:
    print("  unjoinable peak:", w.peak)
    print("  left normal form: ", w.left)
    print("  right normal form:", w.right)
# Without a certificate equivalence falls back to a bounded search.
v = equivalent(tower, cert.witnesses[0].left, cert.witnesses[0].right)
print("  both sides are still equivalent:", v is Verdict.YES)
