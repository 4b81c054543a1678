"""The acceptance battery over the bundled fixtures.

Each criterion returns a :class:`Report`; :func:`run_suite` collects them
in order.  Oracles come from :mod:`gradednets.oracles` or from exact
identities that do not share code with the quantity being checked.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations, product

from .graded_algebra import grading_report
from .homotopy import abelianization, loop_group_presentation, loops_trivial_if_directed
from .io import load_morphism, load_net, load_poset
from .net_algebras import (AlgebraNet, build_corona, canonical_loops, corona_morphism,
                           example_scenario, identity_morphism, induced_algebra_morphism,
                           validate_hilbert_morphism, verify_corona, verify_corona_morphism,
                           verify_isotony)
from .net_hilbert import (agree_on_common_domain, chi_seq, join_projection_identity,
                          p_cycle, projection_leq, domain_order_relations, verify_chi_laws)
from .operators import OperatorSum
from .oracles import RelationClosure, order_complex_h1_rank
from .paths import PathClass, Verdict, enumerate_words, equivalent, identity, loops_at, reduce
from .poset import is_path_connected, is_upward_directed
from .report import Report

CERTIFIED_POSETS = ["chain.json", "crown2.json", "crown3.json", "crown2_top.json"]
ALL_POSETS = CERTIFIED_POSETS + ["antichain.json", "crown2_bottom.json", "chain3_diamond.json",
                                 "bowtie_tower.json"]
NETS = ["net_chain.json", "net_chain_embed.json", "net_crown2.json", "net_crown2_bijective.json",
        "net_crown2_square.json", "net_crown3.json", "net_cone.json", "net_diamond.json"]


def criterion_rewriting(max_len: int = 5, closure_len: int = 7) -> Report:
    rep = Report("rewriting agrees with the relation closure")
    for name in CERTIFIED_POSETS:
        P, _ = load_poset(name)
        rep.check(f"{name}: confluence certificate", P.certified, len(P.certificate.critical_pairs),
                  [str(c.peak) for c in P.certificate.witnesses[:3]])
        R = RelationClosure(P, closure_len)
        groups = defaultdict(list)
        for w in enumerate_words(P, max_len):
            groups[(w.start, w.end)].append(w)
        disagree, unknown, n = [], 0, 0
        for words in groups.values():
            for p, q in combinations(words, 2):
                n += 1
                v = equivalent(P, p, q)
                if v is Verdict.UNKNOWN:
                    unknown += 1
                elif (v is Verdict.YES) != R.same(p, q):
                    disagree.append((str(p), str(q), str(v)))
        rep.check(f"{name}: no disagreement", not disagree, n, disagree[:3])
        rep.check(f"{name}: no unknown verdict", unknown == 0, n, unknown)
    return rep


def criterion_pi1() -> Report:
    rep = Report("loop group invariants")
    expected = {"crown2.json": 1, "crown3.json": 1, "chain.json": 0, "crown2_top.json": 0}
    for name in ALL_POSETS:
        P, _ = load_poset(name)
        if not is_path_connected(P):
            continue
        inv = abelianization(loop_group_presentation(P, P.elements[0]))
        oracle = order_complex_h1_rank(P)
        rep.check(f"{name}: rank matches order-complex b1", inv.rank == oracle, 1,
                  {"rank": inv.rank, "b1": oracle})
        rep.check(f"{name}: torsion-free", not inv.torsion, 1, inv.to_dict())
        if name in expected:
            rep.check(f"{name}: rank {expected[name]}", inv.rank == expected[name], 1, inv.to_dict())
        if is_upward_directed(P):
            samples = [w for a in P.elements for w in loops_at(P, a, 4)]
            rep.extend(loops_trivial_if_directed(P, samples), f"{name} (directed): ")
    return rep


def criterion_chi_laws() -> Report:
    rep = Report("chi laws on every bundled net")
    total = 0
    for name in NETS:
        N, _ = load_net(name)
        sub = verify_chi_laws(N)
        total += sum(a.checked for a in sub.assertions)
        rep.extend(sub, f"{name}: ")
    rep.check("battery is not vacuous", total > 0, total)
    return rep


def _loop_words(N, a, max_len=4):
    return list(loops_at(N.poset, a, min(max_len, N.L)))


def criterion_cycles(max_len: int = 4, budget: int = 4) -> Report:
    rep = Report("cycle algebra")
    for name in NETS:
        N, _ = load_net(name)
        P = N.poset
        pi, tp, tc, eqp, six, join, agree, same = ([] for _ in range(8))
        counts = defaultdict(int)
        for a in P.elements:
            loops = _loop_words(N, a, max_len)
            ops = {w: chi_seq(N, w) for w in loops}
            classes = defaultdict(list)
            for w in loops:
                classes[reduce(P, w)].append(w)
            for w, x in ops.items():
                counts["pi"] += 1
                X = OperatorSum.of(x)
                if X @ X.adjoint() @ X != X or X.adjoint() @ X @ X.adjoint() != X.adjoint():
                    pi.append(str(w))
                src = OperatorSum.of(x.source_projection())
                if X.adjoint() @ X != src or not src.is_projection:
                    pi.append(("source projection", str(w)))
            trivial = [w for w in loops if equivalent(P, w, identity(a)) is Verdict.YES]
            for w in trivial:
                counts["tp"] += 1
                if not ops[w].is_projection:
                    tp.append(str(w))
            for v, w in combinations(trivial[:25], 2):
                counts["tc"] += 1
                V, W = OperatorSum.of(ops[v]), OperatorSum.of(ops[w])
                if V @ W != W @ V:
                    tc.append((str(v), str(w)))
            for members in classes.values():
                for p, q in product(members[:8], repeat=2):
                    counts["pair"] += 1
                    t = OperatorSum.of(ops[p]).adjoint() @ OperatorSum.of(ops[q])
                    if not t.is_projection:
                        eqp.append((str(p), str(q)))
                    if not all(domain_order_relations(N, p, q).values()):
                        six.append((str(p), str(q)))
                    if not join_projection_identity(N, ops[p], ops[q]):
                        join.append((str(p), str(q)))
                    ok, _ = agree_on_common_domain(N, p, q)
                    if not ok:
                        agree.append((str(p), str(q)))
                    if N.all_gammas_bijective and ops[p] != ops[q]:
                        same.append((str(p), str(q)))
        rep.check(f"{name}: chi chi* chi = chi, chi* chi chi* = chi*, chi* chi = Q (x) I",
                  not pi, counts["pi"], pi[:3])
        rep.check(f"{name}: trivial cycles are projections", not tp, counts["tp"], tp[:3])
        rep.check(f"{name}: trivial cycles commute", not tc, counts["tc"], tc[:3])
        rep.check(f"{name}: chi_p* chi_q projection for equivalent loops", not eqp, counts["pair"], eqp[:3])
        rep.check(f"{name}: chi_p* chi_q below both source projections", not six, counts["pair"], six[:3])
        rep.check(f"{name}: join is a partial isometry with source Q-hat (x) I", not join, counts["pair"],
                  join[:3])
        rep.check(f"{name}: equivalent words agree on common domain", not agree, counts["pair"], agree[:3])
        if N.all_gammas_bijective:
            rep.check(f"{name}: bijective net gives identical maps", not same, counts["pair"], same[:3])
        if P.certified:
            rep.extend(_p_cycle_checks(N, budget), f"{name}: ")
    return rep


def _p_cycle_checks(N, budget: int) -> Report:
    P = N.poset
    rep = Report("p-cycles")
    mono, idem, prod_le, rep_ind = [], [], [], []
    n = 0
    for a in P.elements:
        classes = [PathClass(identity(a), P)] + [PathClass(g, P) for g in canonical_loops(P, a, 4)]
        cache = {}

        def chi(c, b):
            key = (c.repr, b)
            if key not in cache:
                cache[key] = p_cycle(N, c, b)
            return cache[key]

        for c in classes[:4]:
            n += 1
            for b in range(budget):
                if not projection_leq(chi(c, b), chi(c, b + 1)):
                    mono.append((str(c), b))
            x = chi(c, budget)
            if x @ x.adjoint() @ x != x:
                idem.append(str(c))
            longer = PathClass.of(P, c.repr * identity(a))
            if p_cycle(N, longer, budget) != x:
                rep_ind.append(str(c))
        half = max(budget // 2, 1)
        for c, d in product(classes[:3], repeat=2):
            cd = PathClass.of(P, c.repr * d.repr)
            if not projection_leq(chi(c, half) @ chi(d, half), p_cycle(N, cd, 2 * half)):
                prod_le.append((str(c), str(d)))
    rep.check("p-cycle domain grows with the budget", not mono, n, mono[:3])
    rep.check("chi_p chi_p* chi_p = chi_p", not idem, n, idem[:3])
    rep.check("p-cycle independent of the representative", not rep_ind, n, rep_ind[:3])
    rep.check("chi_p chi_q <= chi_pq", not prod_le, n, prod_le[:3])
    return rep


def criterion_grading(random_count: int = 100, tol: float = 1e-9) -> Report:
    rep = Report("grading")
    for name, base in [("net_crown2.json", "a1"), ("net_crown2_square.json", "a1"),
                       ("net_chain_embed.json", "b"), ("net_crown3.json", "a1")]:
        N, _ = load_net(name)
        gens = canonical_loops(N.poset, base, 6)[:1]
        rep.extend(grading_report(N, base, gens, random_count=random_count, tol=tol), f"{name}: ")
    return rep


def criterion_nets() -> Report:
    rep = Report("nets of algebras and coronas")
    for name in NETS:
        N, _ = load_net(name)
        A = AlgebraNet(N)
        rep.extend(verify_isotony(A, max_letters=2), f"{name}: ")
        rep.extend(verify_corona(build_corona(A), max_letters=1), f"{name} corona: ")
    N, _ = load_net("net_crown2.json")
    blocks = build_corona(AlgebraNet(N)).decomposition.as_lists()
    rep.check("crown corona blocks", blocks == [["a1", "a2", "b1"], ["a1", "a2", "b2"]], 1, blocks)
    return rep


def criterion_morphisms() -> Report:
    rep = Report("morphisms")
    K, _ = load_net("net_crown2_square.json")
    L, _ = load_net("net_cone.json")
    M, _ = load_morphism("morph_crown_cone.json", K, L)
    rep.extend(validate_hilbert_morphism(M), "crown->cone: ")
    for a in K.poset.elements:
        _, sub = induced_algebra_morphism(M, a)
        rep.extend(sub, f"crown->cone at {a}: ")
    CK, CL = build_corona(AlgebraNet(K)), build_corona(AlgebraNet(L))
    rep.extend(verify_corona_morphism(corona_morphism(M, CK, CL), CK, CL), "crown->cone: ")

    B, _ = load_net("net_crown2_bijective.json")
    I = identity_morphism(B)
    _, sub = induced_algebra_morphism(I, "a1")
    rep.extend(sub, "identity on crown: ")
    rep.check("identity satisfies the faithfulness hypotheses", sub.data["faithful hypotheses"], 1)

    composite = I.compose(I)
    rep.extend(validate_hilbert_morphism(composite), "identity o identity: ")
    MM = identity_morphism(K).compose(M)
    rep.check("composition with the identity", MM.phi == M.phi and MM.Phi == M.Phi, 1)
    return rep


def criterion_example() -> Report:
    return example_scenario()


CRITERIA = [
    ("rewriting", criterion_rewriting),
    ("pi1", criterion_pi1),
    ("chi-laws", criterion_chi_laws),
    ("cycles", criterion_cycles),
    ("grading", criterion_grading),
    ("nets", criterion_nets),
    ("morphisms", criterion_morphisms),
    ("example", criterion_example),
]


def run_suite() -> list[tuple[str, Report]]:
    return [(name, fn()) for name, fn in CRITERIA]
