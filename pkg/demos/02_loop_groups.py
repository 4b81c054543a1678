"""Loop groups of a few small posets, cross-checked against simplicial homology."""

from gradednets.homotopy import abelianization, loop_group_presentation
from gradednets.io import load_poset
from gradednets.oracles import order_complex_h1_rank
from gradednets.poset import is_path_connected

for name in ["chain.json", "crown2.json", "crown3.json", "crown2_top.json", "chain3_diamond.json"]:
    P, _ = load_poset(name)
    if not is_path_connected(P):
        continue
    G = loop_group_presentation(P, P.elements[0])
    ab = abelianization(G)
    print(f"{name:22} generators={len(G.generators)} relators={len(G.relators)} "
          f"abelian rank={ab.rank} torsion={list(ab.torsion)} b1(order complex)={order_complex_h1_rank(P)}")
