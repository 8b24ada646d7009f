"""Fusion systems and Brauer pairs.

A fusion system on the p-group S is stored extensionally: for every
ordered pair of subgroups of S, the set of injective homomorphisms
(as graphs) belonging to the category.  Three constructions appear:

* F_S(G): all conjugation maps c_g with g in an ambient group;
* the block fusion system F_D(b): conjugations compatible with the
  family of Brauer pairs under a chosen maximal pair; and
* the fixed-point presystem fF_S(A): all injections whose twisted
  Brauer quotient is nonzero.

Brauer pairs of a group algebra are subgroups P with a block of the
quotient algebra (kG)(P) ~ kC_G(P); containment is decided through the
pointed-group criterion (a local summand chain), and the block's defect
groups are the maximal subgroups where b survives the Brauer map.
"""

import numpy as np

from . import linalg
from .algebra import group_conjugation_matrix
from .groups import (GroupInjection, all_subgroups, conjugation_injection,
                     injective_maps, p_subgroups_up_to_conjugacy, pinv, pmul)
from .idempotents import block_idempotents
from .points import refine_idempotent


class FusionError(ValueError):
    pass


class FusionSystem:
    """Category on the subgroups of S with injective group maps."""

    def __init__(self, S, homs, label=""):
        self.S = S
        self.subgroups = all_subgroups(S)
        self._by_key = {P.key: P for P in self.subgroups}
        # homs: dict (P.key, Q.key) -> frozenset of graphs
        self.homs = {k: frozenset(v) for k, v in homs.items()}
        self.label = label

    def subgroup(self, key):
        return self._by_key[key]

    def hom_graphs(self, P, Q):
        return self.homs.get((P.key, Q.key), frozenset())

    def hom_maps(self, P, Q):
        return [GroupInjection(P, Q, dict(g), check=False)
                for g in sorted(self.hom_graphs(P, Q))]

    def contains(self, phi):
        """Is the injection phi (into any overgroup of its image) in F?"""
        img = frozenset(phi.mapping.values())
        targets = [Q for Q in self.subgroups if img <= Q.key]
        if not targets:
            return False
        Q = min(targets, key=lambda t: t.order)
        return phi.graph in self.hom_graphs(self.subgroup(phi.domain.key), Q)

    def isomorphisms(self, P, Q):
        """Graphs in Hom(P, Q) that are bijections onto Q."""
        if P.order != Q.order:
            return []
        out = []
        for g in sorted(self.hom_graphs(P, Q)):
            mp = dict(g)
            if frozenset(mp.values()) == Q.key:
                out.append(GroupInjection(P, Q, mp, check=False))
        return out

    def all_isomorphisms(self):
        for P in self.subgroups:
            for Q in self.subgroups:
                for phi in self.isomorphisms(P, Q):
                    yield P, Q, phi

    def automorphisms(self, P):
        return self.isomorphisms(P, P)

    def equals(self, other):
        if self.S.key != other.S.key:
            raise FusionError("fusion systems live on different groups")
        keys = set(self.homs) | set(other.homs)
        return all(self.homs.get(k, frozenset()) ==
                   other.homs.get(k, frozenset()) for k in keys)

    def morphism_counts(self):
        return {(len(self.subgroup(a).elements),
                 len(self.subgroup(b).elements), i): len(v)
                for i, ((a, b), v) in enumerate(sorted(
                    self.homs.items(),
                    key=lambda kv: (len(kv[0][0]), len(kv[0][1]))))}

    def summary(self):
        per = {}
        for (a, b), v in self.homs.items():
            pa = self.subgroup(a).order
            pb = self.subgroup(b).order
            per.setdefault((pa, pb), 0)
            per[(pa, pb)] += len(v)
        return {f"{a}->{b}": n for (a, b), n in sorted(per.items())}

    def serialize(self):
        """Per subgroup pair: morphism count and one representative
        morphism described on the domain's generators."""
        sub_index = {P.key: i for i, P in enumerate(self.subgroups)}
        out = []
        for P in self.subgroups:
            gens = P.generating_sequence()
            for Q in self.subgroups:
                graphs = self.hom_graphs(P, Q)
                if not graphs:
                    continue
                rep = dict(sorted(graphs)[0])
                out.append({
                    "source": {"index": sub_index[P.key], "order": P.order},
                    "target": {"index": sub_index[Q.key], "order": Q.order},
                    "count": len(graphs),
                    "representative_on_generators": [
                        [list(g), list(rep[g])] for g in gens],
                })
        return out


def fusion_from_group(S, G, label=None):
    """F_S(G): morphisms are restrictions of conjugations by G."""
    subgroups = all_subgroups(S)
    homs = {}
    for P in subgroups:
        for Q in subgroups:
            graphs = set()
            for g in G.elements:
                gi = pinv(g)
                if all(pmul(pmul(g, x), gi) in Q.key for x in P.elements):
                    graphs.add(frozenset((x, pmul(pmul(g, x), gi))
                                         for x in P.elements))
            homs[(P.key, Q.key)] = graphs
    return FusionSystem(S, homs, label=label or f"F_S({G.label})")


def fixed_point_presystem(ia, label="fF"):
    """Hom(P, Q) = injections with nonzero twisted Brauer quotient."""
    from .groups import TwistedDiagonal
    D = ia.D
    subgroups = all_subgroups(D)
    homs = {}
    for P in subgroups:
        for Q in subgroups:
            graphs = set()
            for phi in injective_maps(P, Q):
                into_d = GroupInjection(P, D, phi.mapping, check=False)
                if ia.brauer(TwistedDiagonal(into_d)).dim > 0:
                    graphs.add(phi.graph)
            homs[(P.key, Q.key)] = graphs
    return FusionSystem(D, homs, label=label)


def is_divisible(F):
    """Puig divisibility: inclusions, iso-then-inclusion factoring,
    closure under composition; all checked literally on homsets."""
    for P in F.subgroups:
        for Q in F.subgroups:
            if P.key <= Q.key:
                inc = frozenset((x, x) for x in P.elements)
                if inc not in F.hom_graphs(P, Q):
                    return False
    for P in F.subgroups:
        for Q in F.subgroups:
            for g in F.hom_graphs(P, Q):
                mp = dict(g)
                img_key = frozenset(mp.values())
                img = F.subgroup(img_key) if img_key in F._by_key else None
                if img is None:
                    return False
                if g not in F.hom_graphs(P, img):
                    return False
                ginv = frozenset((y, x) for x, y in mp.items())
                if ginv not in F.hom_graphs(img, P):
                    return False
    for P in F.subgroups:
        for Q in F.subgroups:
            for R in F.subgroups:
                for g1 in F.hom_graphs(P, Q):
                    m1 = dict(g1)
                    for g2 in F.hom_graphs(Q, R):
                        m2 = dict(g2)
                        comp = frozenset((x, m2[y]) for x, y in m1.items())
                        if comp not in F.hom_graphs(P, R):
                            return False
    return True


def fusion_equal(F1, F2):
    return F1.equals(F2)


# ---------------------------------------------------------------------------
# Brauer pairs of a group algebra
# ---------------------------------------------------------------------------

class BrauerPairs:
    """Brauer pairs of kG over the subgroups of a fixed Sylow p-subgroup."""

    def __init__(self, ia, rng):
        self.ia = ia                      # InteriorAlgebra(kG, S)
        self.A = ia.A
        self.S = ia.D
        self.rng = rng
        self._blocks = {}                 # P.key -> list of quotient blocks

    def quotient(self, P):
        return self.ia.brauer_at(P)

    def blocks_at(self, P):
        """Central primitive idempotents of (kG)(P), in quotient coords."""
        if P.key not in self._blocks:
            Q = self.quotient(P).algebra()
            self._blocks[P.key] = block_idempotents(Q, self.rng)
        return self._blocks[P.key]

    def block_index(self, P, vec):
        for i, e in enumerate(self.blocks_at(P)):
            if np.array_equal(e, vec):
                return i
        raise FusionError("vector is not a stored block of (kG)(P)")

    def image_under(self, P, e_qcoords, g):
        """^g e as a block of (kG)(gPg^-1); target must be <= S."""
        bq_src = self.quotient(P)
        lifted = bq_src.lift(e_qcoords)
        conj = linalg.matvec(self.A.field,
                             group_conjugation_matrix(self.A, g), lifted)
        Pg = P.conjugate(g)
        bq_dst = self.quotient(Pg)
        return bq_dst.project(conj)

    def brauer_image(self, P, vec_in_A):
        """br_P of an A-vector fixed by conjugation, in quotient coords."""
        return self.quotient(P).project(vec_in_A)

    def under_block(self, P, i_vec):
        """The unique block e of (kG)(P) with e.br_P(i) = br_P(i), or None
        when br_P(i) = 0."""
        bq = self.quotient(P)
        img = bq.project(i_vec)
        if not np.any(img):
            return None
        Qalg = bq.algebra()
        hits = [t for t, e in enumerate(self.blocks_at(P))
                if np.array_equal(Qalg.mul(e, img), img)]
        assert len(hits) == 1, "Brauer image not under a unique block"
        return hits[0]

    def pair_leq(self, P, eP_idx, Q, eQ_idx):
        """(P, e_P) <= (Q, e_Q) via the local pointed-group criterion."""
        if not P.key <= Q.key:
            return False
        if P.key == Q.key:
            return eP_idx == eQ_idx
        from .points import unit_decomposition
        for i in unit_decomposition(self.ia, Q, self.rng):
            if self.under_block(Q, i) != eQ_idx:
                continue
            for j in refine_idempotent(self.ia, P, i, self.rng):
                if self.under_block(P, j) == eP_idx:
                    return True
        return False

    def pairs_over_block(self, b):
        """All pairs (P, e) with (1, b) <= (P, e), over subgroups of S."""
        out = []
        for P in all_subgroups(self.S):
            bq = self.quotient(P)
            bimg = bq.project(np.asarray(b))
            if not np.any(bimg):
                continue
            Qalg = bq.algebra()
            for idx, e in enumerate(self.blocks_at(P)):
                if np.array_equal(Qalg.mul(e, bimg), e):
                    out.append((P, idx))
        return out


class BrauerPairPoset:
    """The interval of Brauer pairs over one block, with G-structure."""

    def __init__(self, pairs_engine, G, b, rng):
        self.engine = pairs_engine
        self.G = G
        self.b = np.asarray(b)
        self.rng = rng
        self.pairs = pairs_engine.pairs_over_block(b)
        self.leq = {}
        for a, (P, ei) in enumerate(self.pairs):
            for c, (Q, ej) in enumerate(self.pairs):
                if P.key <= Q.key:
                    self.leq[(a, c)] = pairs_engine.pair_leq(P, ei, Q, ej)
        self.maximal = [a for a in range(len(self.pairs))
                        if not any(self.leq.get((a, c)) and a != c
                                   for c in range(len(self.pairs)))]
        self._check_maximal_conjugate()

    def _check_maximal_conjugate(self):
        if len(self.maximal) <= 1:
            return
        base = self.maximal[0]
        for other in self.maximal[1:]:
            if not self._conjugate_pairs(base, other):
                raise FusionError("maximal Brauer pairs are not conjugate")

    def _conjugate_pairs(self, a, c):
        P, ei = self.pairs[a]
        Q, ej = self.pairs[c]
        if P.order != Q.order:
            return False
        for g in self.G.elements:
            if P.conjugate(g).key != Q.key:
                continue
            moved = self.engine.image_under(P, self.engine.blocks_at(P)[ei], g)
            if self.engine.block_index(Q, moved) == ej:
                return True
        return False

    def pair(self, idx):
        return self.pairs[idx]

    def maximal_pairs(self):
        return [self.pairs[a] for a in self.maximal]


def defect_groups(ia_kG, b, rng):
    """Maximal p-subgroup classes where br_P(b) survives."""
    G = ia_kG.A.group
    p = _prime_of(ia_kG)
    reps = []
    for P in p_subgroups_up_to_conjugacy(G, p):
        Ps = ia_kG.D.subgroup(_conjugate_into(G, P, ia_kG.D))
        bq = ia_kG.brauer_at(Ps)
        if np.any(bq.project(np.asarray(b))):
            reps.append(Ps)
    maximal = [P for P in reps
               if not any(P.order < Q.order and _subconjugate(G, P, Q)
                          for Q in reps)]
    assert maximal, "no defect group found (b is not an idempotent?)"
    orders = {P.order for P in maximal}
    assert len(orders) == 1, "non-conjugate maximal defect candidates"
    for P in maximal[1:]:
        assert _conjugate_subgroups(G, maximal[0], P), \
            "defect groups not conjugate"
    return maximal


def _prime_of(ia):
    return ia.A.field.p


def _conjugate_into(G, P, S):
    """Elements of a G-conjugate of P lying inside S."""
    if P.key <= S.key:
        return P.key
    for g in G.elements:
        moved = P.conjugate(g)
        if moved.key <= S.key:
            return moved.key
    raise FusionError("p-subgroup cannot be conjugated into the Sylow group")


def _subconjugate(G, P, Q):
    return any(P.conjugate(g).key <= Q.key for g in G.elements)


def _conjugate_subgroups(G, P, Q):
    return any(P.conjugate(g).key == Q.key for g in G.elements)


def block_fusion(poset, max_idx, label=None):
    """F_D(b) from a chosen maximal pair (D, e_D)."""
    engine = poset.engine
    G = poset.G
    D, eD_idx = poset.pairs[max_idx]
    family = {}
    for a, (P, ei) in enumerate(poset.pairs):
        if P.key <= D.key and poset.leq.get((a, max_idx)):
            if P.key in family and family[P.key] != ei:
                raise FusionError("Brauer subpair is not unique")
            family.setdefault(P.key, ei)
    for P in all_subgroups(D):
        assert P.key in family, "missing Brauer subpair below the maximal pair"
    homs = {}
    subs = all_subgroups(D)
    for P in subs:
        for Q in subs:
            graphs = set()
            for g in G.elements:
                Pg = P.conjugate(g)
                if not Pg.key <= Q.key:
                    continue
                moved = engine.image_under(
                    P, engine.blocks_at(P)[family[P.key]], g)
                if engine.block_index(Pg, moved) == family[Pg.key]:
                    graphs.add(conjugation_injection(P, g, Q).graph)
            homs[(P.key, Q.key)] = graphs
    F = FusionSystem(D, homs, label=label or "F_D(b)")
    F.pair_family = family
    F.defect = D
    return F
