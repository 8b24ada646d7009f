"""Checkers for unital invariant bases, twisted units, and balance.

Everything here is exact: searches are randomized (seeded) with optional
exhaustive enumeration on small spaces, but every positive answer is
verified by direct multiplication, and the three top-level conditions

    (i)   a unital (D,D)-invariant basis exists,
    (ii)  every fixed-point-fusion isomorphism has a twisted unit,
    (iii) the algebra is (intrinsically) balanced,

are computed independently and compared; a mismatch is surfaced as a
finding, never patched over.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .bisets import _into_group, explicit_invariant_basis
from .groups import GroupInjection, TwistedDiagonal, all_subgroups
from .idempotents import are_associate, sandwich_rows, transpotent_pair
from .interior import quotient_product
from .points import (Point, conjugate_point, local_points,
                     local_invariant_decomposition, point_of, points,
                     refine_idempotent, _associate_in_fixed)


class Finding(RuntimeError):
    """A proved statement failed computationally; carries full witnesses."""

    def __init__(self, condition, payload):
        super().__init__(f"FINDING: {condition}")
        self.condition = condition
        self.payload = payload


# ---------------------------------------------------------------------------
# units in twisted fixed subspaces
# ---------------------------------------------------------------------------

def unit_in_subspace(ia, rows, rng, samples=64, exhaustive=False,
                     exhaustive_cap=2 ** 20):
    """A unit of A inside the row span, or None with the budget record.

    Returns (vector_or_None, record).  The negative is certain when the
    subspace was enumerated exhaustively, else high-confidence only.
    """
    A = ia.A
    f = A.field
    rows = np.asarray(rows, dtype=np.int64)
    record = {"dim": int(rows.shape[0]), "samples": 0, "exhaustive": False}
    if rows.shape[0] == 0:
        return None, record
    for t in range(rows.shape[0]):
        if A.is_unit(rows[t]):
            return rows[t], record
    space = f.q ** rows.shape[0]
    if exhaustive or space <= 4096:
        if space <= exhaustive_cap:
            record["exhaustive"] = True
            for code in range(space):
                c = code
                coeffs = np.zeros(rows.shape[0], dtype=np.int64)
                for t in range(rows.shape[0]):
                    coeffs[t] = c % f.q
                    c //= f.q
                v = linalg.vecmat(f, coeffs, rows)
                if np.any(v) and A.is_unit(v):
                    return v, record
            return None, record
    for _ in range(samples):
        record["samples"] += 1
        coeffs = f.random_elements(rng, rows.shape[0])
        v = linalg.vecmat(f, coeffs, rows)
        if np.any(v) and A.is_unit(v):
            return v, record
    return None, record


def twisted_fixed_rows(ia, phi):
    """Rows of the twisted fixed module for Delta(phi, P), phi into D."""
    return ia.brauer(TwistedDiagonal(phi)).fixed.basis


class ExtensionNeeded(RuntimeError):
    """Search exhausted over the current field; retry over an extension."""


def build_unital_basis(ia, presystem, rng, exhaustive=False, retries=12):
    """Invariant basis of units via orbit replacement y -> y + lambda.u.

    Returns (InvariantBasis, None) on success or (None, evidence) when
    some orbit stabilizer's fixed module contains no unit (with the
    search record), which by the fixed-point criterion means no unital
    invariant basis exists over this field.
    """
    A = ia.A
    f = A.field
    basis = explicit_invariant_basis(ia, rng)
    vectors = [np.asarray(v) for v in basis.vectors]
    for (start, length), td in zip(basis.orbit_slices, basis.stabilizers):
        y = vectors[start]
        if A.is_unit(y):
            continue
        rows = ia.brauer(td).fixed.basis
        u, record = unit_in_subspace(ia, rows, rng, exhaustive=exhaustive)
        if u is None:
            return None, {"orbit_class": basis.shape().classes.class_index(td),
                          "search": record}
        replaced = _replace_basis_orbit(ia, vectors, start, length, td, y, u,
                                        rng)
        if replaced is None:
            raise ExtensionNeeded(
                "no lambda kept the replaced orbit a basis of units")
        vectors = replaced
    out = type(basis)(ia, vectors, basis.orbit_slices, basis.stabilizers)
    assert out.is_unital()
    _assert_invariant(ia, out)
    return out, None


def _replace_basis_orbit(ia, vectors, start, length, td, y, u, rng):
    A = ia.A
    f = A.field
    sub_pairs = td.pairs
    from .interior import decode_pair, pair_subgroup
    d2_group = pair_subgroup(ia.D, [(a, b) for a in ia.D.elements
                                    for b in ia.D.elements])
    sub = pair_subgroup(ia.D, sub_pairs)
    reps = d2_group.left_coset_reps(sub)
    others = [v for t, v in enumerate(vectors)
              if not (start <= t < start + length)]
    for lam in range(f.q):
        cand = A.add(y, A.scale(lam, u))
        if not A.is_unit(cand):
            continue
        orbit = []
        seen = set()
        good = True
        for enc in reps:
            d1, d2 = decode_pair(ia.D, enc)
            w = ia.act(d1, d2, cand)
            wb = np.asarray(w).tobytes()
            if wb in seen:
                good = False
                break
            seen.add(wb)
            orbit.append(w)
        if not good:
            continue
        stacked = np.array(others + orbit, dtype=np.int64)
        if linalg.rank(f, stacked) != A.dim:
            continue
        out = list(vectors)
        out[start:start + length] = orbit
        return out
    return None


def _assert_invariant(ia, basis):
    keys = {np.asarray(v).tobytes() for v in basis.vectors}
    for d in ia.D.generating_sequence() or [ia.D.identity]:
        for v in basis.vectors:
            assert np.asarray(ia.left(d, v)).tobytes() in keys
            assert np.asarray(ia.right(v, d)).tobytes() in keys


def unital_basis_exists(ia, presystem, rng, exhaustive=False):
    """Fixed-point criterion for unital bases: a unit in every
    isomorphism's twisted fixed module."""
    table = {}
    ok = True
    for P, Q, phi in presystem.all_isomorphisms():
        rows = twisted_fixed_rows(ia, _into_group(phi, ia.D))
        u, record = unit_in_subspace(ia, rows, rng, exhaustive=exhaustive)
        table[_phi_label(phi)] = (u is not None, record)
        if u is None:
            ok = False
    return ok, table


def _phi_label(phi):
    return (tuple(sorted(phi.domain.elements)),
            tuple(sorted(phi.graph)))


# ---------------------------------------------------------------------------
# isofusion (unital local Puig category)
# ---------------------------------------------------------------------------

def isofusion(ia, phi, P, gamma, Q, delta):
    """Transpotent test: phi in Iso(P_gamma, Q_delta)?  Returns (s, t) or
    None; witnesses satisfy t.s = i and s.t = j exactly."""
    A = ia.A
    i = np.asarray(gamma.rep)
    j = np.asarray(delta.rep)
    phi_d = _into_group(phi, ia.D)
    phi_inv_d = _into_group(phi.corestrict().inverse(), ia.D)
    rows_phi = ia.brauer(TwistedDiagonal(phi_d)).fixed.basis
    rows_inv = ia.brauer(TwistedDiagonal(phi_inv_d)).fixed.basis
    s_rows = sandwich_rows(A, j, rows_phi, i)      # j . ^phi A^P . i
    t_rows = sandwich_rows(A, i, rows_inv, j)      # i . ^phi^-1 A^Q . j
    return transpotent_pair(A, i, j, t_rows, s_rows)


def theta_of_point(ia, phi, P, gamma, Q, rng, expect_unique=True):
    """The unique local point delta of A^Q with phi: P_gamma ~ Q_delta."""
    hits = []
    for delta in local_points(ia, Q, rng):
        if isofusion(ia, phi, P, gamma, Q, delta) is not None:
            hits.append(delta)
    if expect_unique and len(hits) > 1:
        raise Finding("theta_target_not_unique",
                      {"phi": _phi_label(phi), "gamma": gamma.index,
                       "targets": [d.index for d in hits]})
    return hits[0] if hits else None


# ---------------------------------------------------------------------------
# twisted units
# ---------------------------------------------------------------------------

@dataclass
class TwistedUnit:
    phi: GroupInjection            # iso P -> Q, into D
    u: np.ndarray                  # class coordinates in A(phi)
    udag: np.ndarray               # class coordinates in A(phi^-1)


def _phi_pair(ia, phi):
    """(phi into D, phi^{-1} into D) for an isomorphism onto its image."""
    phi_d = _into_group(phi, ia.D)
    inv_d = _into_group(phi.corestrict().inverse(), ia.D)
    return phi_d, inv_d


def pairing_matrix(ia, bq_left, bq_right, bq_out):
    """Matrix of (v, u) -> class(v.u) in the right argument u, for fixed
    basis classes of the left; returns list of columns over left basis."""
    cols = []
    for t in range(bq_left.dim):
        e = np.zeros(bq_left.dim, dtype=np.int64)
        e[t] = 1
        cols.append(e)
    return cols


def twisted_unit_exists(ia, phi, rng, samples=64, exhaustive=True):
    """A twisted unit of phi with its (unique) twisted inverse, or None."""
    A = ia.A
    f = A.field
    phi_d, inv_d = _phi_pair(ia, phi)
    bq_phi = ia.brauer(TwistedDiagonal(phi_d))
    bq_inv = ia.brauer(TwistedDiagonal(inv_d))
    P = phi_d.domain
    Q = phi_d.image()
    bq_P = ia.brauer_at(P)
    bq_Q = ia.brauer_at(Q)
    if not (bq_phi.dim == bq_inv.dim == bq_P.dim == bq_Q.dim):
        return None
    if bq_phi.dim == 0:
        return None
    one_P = bq_P.project(np.asarray(A.unit))
    one_Q = bq_Q.project(np.asarray(A.unit))

    def try_u(u_coords):
        # columns of v -> class(v.u) over the basis of A(phi^-1)
        cols = []
        for t in range(bq_inv.dim):
            e = np.zeros(bq_inv.dim, dtype=np.int64)
            e[t] = 1
            c, _ = quotient_product(bq_inv, bq_phi, e, u_coords, bq_P)
            cols.append(c)
        m = np.array(cols, dtype=np.int64).T
        v = linalg.solve(f, m, one_P)
        if v is None:
            return None
        c2, _ = quotient_product(bq_phi, bq_inv, u_coords, v, bq_Q)
        if not np.array_equal(c2, one_Q):
            return None
        return TwistedUnit(phi=phi_d, u=np.asarray(u_coords),
                           udag=np.asarray(v))

    space = f.q ** bq_phi.dim
    if exhaustive and space <= 2 ** 16:
        for code in range(1, space):
            c = code
            coeffs = np.zeros(bq_phi.dim, dtype=np.int64)
            for t in range(bq_phi.dim):
                coeffs[t] = c % f.q
                c //= f.q
            tu = try_u(coeffs)
            if tu is not None:
                return tu
        return None
    for _ in range(samples):
        coeffs = f.random_elements(rng, bq_phi.dim)
        if not np.any(coeffs):
            continue
        tu = try_u(coeffs)
        if tu is not None:
            return tu
    return None


def has_all_twisted_units(ia, presystem, rng, pair_checks=20):
    """Twisted units for every presystem isomorphism, plus the pairing
    surjectivity spot-check on composable isomorphism pairs."""
    table = {}
    ok = True
    isos = list(presystem.all_isomorphisms())
    for P, Q, phi in isos:
        tu = twisted_unit_exists(ia, phi, rng)
        table[_phi_label(phi)] = tu is not None
        if tu is None:
            ok = False
    if ok:
        _pairing_surjectivity_check(ia, isos, rng, pair_checks)
    return ok, table


def _pairing_surjectivity_check(ia, isos, rng, budget):
    """Pairing surjectivity: products span A(psi.phi) for composable isos
    whenever all twisted units exist."""
    f = ia.A.field
    comp = [(p1, p2) for p1 in isos for p2 in isos
            if p1[2].image().key == p2[0].key]
    if not comp:
        return
    idx = rng.permutation(len(comp))[:budget]
    for t in idx:
        (P, Q, phi), (Q2, R, psi) = comp[int(t)]
        phi_d, _ = _phi_pair(ia, phi)
        psi_d, _ = _phi_pair(ia, psi)
        bq_phi = ia.brauer(TwistedDiagonal(phi_d))
        bq_psi = ia.brauer(TwistedDiagonal(psi_d))
        comp_inj = psi_d.compose(phi_d.corestrict(psi_d.domain))
        bq_out = ia.brauer(TwistedDiagonal(comp_inj))
        if bq_out.dim == 0:
            continue
        spans = []
        for a in range(bq_psi.dim):
            ea = np.zeros(bq_psi.dim, dtype=np.int64)
            ea[a] = 1
            for c in range(bq_phi.dim):
                ec = np.zeros(bq_phi.dim, dtype=np.int64)
                ec[c] = 1
                w, _ = quotient_product(bq_psi, bq_phi, ea, ec, bq_out)
                spans.append(w)
        got = linalg.rank(f, np.array(spans, dtype=np.int64))
        if got != bq_out.dim:
            raise Finding("pairing_not_surjective",
                          {"phi": _phi_label(phi), "psi": _phi_label(psi),
                           "rank": int(got), "dim": int(bq_out.dim)})


def theta_map(ia, phi, P, Q, rng, tu=None):
    """theta_phi : LP(A^P) -> LP(A^Q) by the transpotent criterion;
    when a twisted unit is given, the conjugation transport must induce
    the same map on points, and any mismatch is a finding."""
    mapping = {}
    for gamma in local_points(ia, P, rng):
        delta = theta_of_point(ia, phi, P, gamma, Q, rng)
        if delta is None:
            return None
        mapping[gamma.index] = delta.index
    if len(set(mapping.values())) != len(mapping):
        raise Finding("theta_not_injective", {"phi": _phi_label(phi),
                                              "mapping": mapping})
    if len(mapping) != len(local_points(ia, Q, rng)):
        raise Finding("theta_not_surjective", {"phi": _phi_label(phi),
                                               "mapping": mapping})
    if tu is not None:
        via_unit = theta_map_via_twisted_unit(ia, phi, tu, P, Q, rng)
        if via_unit != mapping:
            raise Finding("theta_disagrees_with_twisted_unit",
                          {"phi": _phi_label(phi), "transpotent": mapping,
                           "unit": via_unit})
    return mapping


def theta_map_via_twisted_unit(ia, phi, tu, P, Q, rng):
    """e -> class of u . br(e) . u-dagger, matched to local points of Q."""
    A = ia.A
    phi_d, inv_d = _phi_pair(ia, phi)
    bq_phi = ia.brauer(TwistedDiagonal(phi_d))
    bq_inv = ia.brauer(TwistedDiagonal(inv_d))
    bq_P = ia.brauer_at(P)
    bq_Q = ia.brauer_at(Q)
    Qalg = bq_Q.algebra()
    out = {}
    targets = {d.index: bq_Q.project(np.asarray(d.rep))
               for d in local_points(ia, Q, rng)}
    for gamma in local_points(ia, P, rng):
        ebar = bq_P.project(np.asarray(gamma.rep))
        w1, bq_mid = quotient_product(bq_phi, bq_P, tu.u, ebar)
        w2, _ = quotient_product(bq_mid, bq_inv, w1, tu.udag, bq_Q)
        hits = [idx for idx, jbar in targets.items()
                if are_associate(Qalg, w2, jbar)]
        assert len(hits) == 1, "twisted-unit transport not a point match"
        out[gamma.index] = hits[0]
    return out


def twisted_unit_laws_report(ia, presystem, rng, tu_table=None):
    """The twisted-unit laws verified on computed witnesses: closure of
    composable products, uniqueness of twisted inverses, biregular
    translations, and multiplicativity of conjugation transport."""
    isos = list(presystem.all_isomorphisms())
    units = {}
    for P, Q, phi in isos:
        tu = twisted_unit_exists(ia, phi, rng)
        if tu is None:
            return {"all_twisted_units": False}
        units[_phi_label(phi)] = (P, Q, phi, tu)
    report = {"all_twisted_units": True, "closure": True,
              "inverse_unique": True, "translation_regular": True,
              "conjugation_multiplicative": True}
    f = ia.A.field
    for P, Q, phi in isos:
        tu = units[_phi_label(phi)][3]
        phi_d, inv_d = _phi_pair(ia, phi)
        bq_phi = ia.brauer(TwistedDiagonal(phi_d))
        bq_inv = ia.brauer(TwistedDiagonal(inv_d))
        bq_P = ia.brauer_at(phi_d.domain)
        bq_Q = ia.brauer_at(phi_d.image())
        one_P = bq_P.project(np.asarray(ia.A.unit))
        # the twisted inverse is unique
        cols = []
        for t in range(bq_inv.dim):
            e = np.zeros(bq_inv.dim, dtype=np.int64)
            e[t] = 1
            c, _ = quotient_product(bq_inv, bq_phi, e, tu.u, bq_P)
            cols.append(c)
        m = np.array(cols, dtype=np.int64).T
        sols = linalg.nullspace(f, m)
        if sols.shape[0] != 0:
            report["inverse_unique"] = False
        # conjugation transport is multiplicative A(P) -> A(Q)
        Palg = bq_P.algebra()
        Qalg = bq_Q.algebra()

        def conj_class(c):
            w1, bq_mid = quotient_product(bq_phi, bq_P, tu.u, c)
            w2, _ = quotient_product(bq_mid, bq_inv, w1, tu.udag, bq_Q)
            return w2
        for a in range(bq_P.dim):
            ea = np.zeros(bq_P.dim, dtype=np.int64)
            ea[a] = 1
            for b in range(bq_P.dim):
                eb = np.zeros(bq_P.dim, dtype=np.int64)
                eb[b] = 1
                lhs = conj_class(Palg.mul(ea, eb))
                rhs = Qalg.mul(conj_class(ea), conj_class(eb))
                if not np.array_equal(lhs, rhs):
                    report["conjugation_multiplicative"] = False
    # composable products of twisted units are twisted units
    for P1, Q1, phi in isos:
        for P2, Q2, psi in isos:
            if phi.image().key != P2.key:
                continue
            tu_phi = units[_phi_label(phi)][3]
            tu_psi = units[_phi_label(psi)][3]
            phi_d, phi_inv = _phi_pair(ia, phi)
            psi_d, psi_inv = _phi_pair(ia, psi)
            comp = psi_d.compose(phi_d.corestrict(psi_d.domain))
            bq_comp = ia.brauer(TwistedDiagonal(comp))
            w, _ = quotient_product(ia.brauer(TwistedDiagonal(psi_d)),
                                    ia.brauer(TwistedDiagonal(phi_d)),
                                    tu_psi.u, tu_phi.u, bq_comp)
            # check w has a left inverse: it should itself be a twisted unit
            comp_inv = phi_inv.compose(psi_inv.corestrict(phi_inv.domain))
            bq_ci = ia.brauer(TwistedDiagonal(comp_inv))
            bq_P = ia.brauer_at(comp.domain)
            one_P = bq_P.project(np.asarray(ia.A.unit))
            cols = []
            for t in range(bq_ci.dim):
                e = np.zeros(bq_ci.dim, dtype=np.int64)
                e[t] = 1
                c, _ = quotient_product(bq_ci, bq_comp, e, w, bq_P)
                cols.append(c)
            v = linalg.solve(f, np.array(cols, dtype=np.int64).T, one_P)
            if v is None:
                report["closure"] = False
    # biregular translations between two twisted units
    for P, Q, phi in isos:
        tu = units[_phi_label(phi)][3]
        phi_d, inv_d = _phi_pair(ia, phi)
        bq_phi = ia.brauer(TwistedDiagonal(phi_d))
        bq_P = ia.brauer_at(phi_d.domain)
        bq_Q = ia.brauer_at(phi_d.image())
        v_coords = None
        for _ in range(4):
            cand = f.random_elements(rng, bq_phi.dim)
            tu2 = _try_twisted(ia, phi, cand)
            if tu2 is not None:
                v_coords = tu2
                break
        if v_coords is None:
            continue
        # unique x_P with u.x_P = v and unique x_Q with x_Q.u = v
        for (left, bq_x) in ((True, bq_P), (False, bq_Q)):
            cols = []
            for t in range(bq_x.dim):
                e = np.zeros(bq_x.dim, dtype=np.int64)
                e[t] = 1
                if left:
                    c, _ = quotient_product(bq_phi, bq_P, tu.u, e, bq_phi)
                else:
                    c, _ = quotient_product(bq_Q, bq_phi, e, tu.u, bq_phi)
                cols.append(c)
            m = np.array(cols, dtype=np.int64).T
            sol = linalg.solve(f, m, v_coords.u)
            null = linalg.nullspace(f, m)
            if sol is None or null.shape[0] != 0:
                report["translation_regular"] = False
    return report


def _try_twisted(ia, phi, coords):
    """Package coords as a TwistedUnit if a twisted inverse exists."""
    A = ia.A
    f = A.field
    phi_d, inv_d = _phi_pair(ia, phi)
    bq_phi = ia.brauer(TwistedDiagonal(phi_d))
    bq_inv = ia.brauer(TwistedDiagonal(inv_d))
    bq_P = ia.brauer_at(phi_d.domain)
    bq_Q = ia.brauer_at(phi_d.image())
    one_P = bq_P.project(np.asarray(A.unit))
    one_Q = bq_Q.project(np.asarray(A.unit))
    cols = []
    for t in range(bq_inv.dim):
        e = np.zeros(bq_inv.dim, dtype=np.int64)
        e[t] = 1
        c, _ = quotient_product(bq_inv, bq_phi, e, coords, bq_P)
        cols.append(c)
    v = linalg.solve(f, np.array(cols, dtype=np.int64).T, one_P)
    if v is None:
        return None
    c2, _ = quotient_product(bq_phi, bq_inv, coords, v, bq_Q)
    if not np.array_equal(c2, one_Q):
        return None
    return TwistedUnit(phi=phi_d, u=np.asarray(coords), udag=np.asarray(v))


# ---------------------------------------------------------------------------
# point transport on the pointed Brown poset, and the global-unit lift
# ---------------------------------------------------------------------------

def restricted_iso(phi, R):
    """phi restricted to R <= dom(phi), as an iso onto phi(R)."""
    res = phi.restrict(R)
    return res.corestrict()


def theta_structure_report(ia, phi, P, Q, rng):
    """Structure of the point transport across the pointed Brown posets:
    order preservation, conjugation equivariance, and (relative)
    multiplicity preservation under every restriction of phi."""
    report = {"defined": True, "order": True, "equivariant": True,
              "multiplicity": True, "relative_multiplicity": True}
    theta = {}
    for R in all_subgroups(P):
        res = restricted_iso(phi, R)
        Rimg = res.image()
        for eps in local_points(ia, R, rng):
            tgt = theta_of_point(ia, res, R, eps, Rimg, rng)
            if tgt is None:
                report["defined"] = False
                report["undefined_at"] = (R.order, eps.index)
                return report
            theta[(R.key, eps.index)] = (Rimg, tgt)
    pairs = [(R, eps) for R in all_subgroups(P)
             for eps in local_points(ia, R, rng)]
    for R, eps in pairs:
        Rimg, eps_t = theta[(R.key, eps.index)]
        # (iii) multiplicities
        if eps.multiplicity != eps_t.multiplicity:
            report["multiplicity"] = False
        # (ii) equivariance over generators of P
        for g in P.generating_sequence() or [P.identity]:
            Rg, eps_g = conjugate_point(ia, R, eps, g, rng)
            img_g, tgt_g = theta[(Rg.key, eps_g.index)]
            Rt_conj, tgt_conj = conjugate_point(ia, Rimg, eps_t, phi(g), rng)
            if not (img_g.key == Rt_conj.key and
                    tgt_g.index == tgt_conj.index):
                report["equivariant"] = False
        # (i)/(iv) order and relative multiplicities against larger groups
        for R2, eps2 in pairs:
            if not R.key <= R2.key:
                continue
            m_rel = relative_mult(ia, R, eps, R2, eps2, rng)
            R2img, eps2_t = theta[(R2.key, eps2.index)]
            m_rel_t = relative_mult(ia, Rimg, eps_t, R2img, eps2_t, rng)
            if (m_rel > 0) != (m_rel_t > 0):
                report["order"] = False
            if m_rel != m_rel_t:
                report["relative_multiplicity"] = False
    report["all"] = all(report[k] for k in
                        ("defined", "order", "equivariant", "multiplicity",
                         "relative_multiplicity"))
    return report


def relative_mult(ia, Rp, pt_prime, R, pt, rng):
    from .points import relative_multiplicity
    return relative_multiplicity(ia, Rp, pt_prime, R, pt, rng)


def _pointed_class_key(ia, P, H, pt, rng):
    """Canonical key of the P-conjugacy class of the pointed group (H, pt)."""
    best = None
    for g in P.elements:
        Hg, ptg = conjugate_point(ia, H, pt, g, rng)
        cand = (tuple(sorted(Hg.elements)), ptg.index)
        if best is None or cand < best:
            best = cand
    return best


def lift_to_global_unit(ia, phi, P, Q, rng):
    """Unit of A inside the twisted fixed module, assembled from matched
    local invariant decompositions via relative traces of transporters;
    returns (u, v) with v.u = u.v = 1."""
    A = ia.A
    f = A.field
    phi_d, inv_d = _phi_pair(ia, phi)
    E = local_invariant_decomposition(ia, P, rng)
    F = local_invariant_decomposition(ia, Q, rng)

    def classify(parts, group):
        classes = {}
        for v, H in parts:
            pt = point_of(ia, H, v, rng)
            key = _pointed_class_key(ia, group, H, pt, rng)
            classes.setdefault(key, []).append((v, H, pt))
        return classes

    E_classes = classify(E, P)
    F_classes = classify(F, Q)

    total_u = A.zero()
    total_v = A.zero()
    matched_f_keys = set()
    for key, members in sorted(E_classes.items()):
        # normalize all members of this class to a common (R, eps)
        R_elems, eps_index = key
        R = P.subgroup(R_elems)
        eps = points(ia, R, rng)[eps_index]
        res = restricted_iso(phi, R)
        Rimg = res.image()
        eps_t = theta_of_point(ia, res, R, eps, Rimg, rng)
        if eps_t is None:
            raise Finding("lift_missing_theta",
                          {"phi": _phi_label(phi), "R_order": R.order})
        f_key = _pointed_class_key(ia, Q, Rimg, eps_t, rng)
        fmembers = F_classes.get(f_key, [])
        if len(members) != len(fmembers):
            raise Finding("lift_class_size_mismatch",
                          {"phi": _phi_label(phi), "R_order": R.order,
                           "E": len(members), "F": len(fmembers)})
        matched_f_keys.add(f_key)
        e_orbit_reps = _orbit_reps_normalized(ia, P, members, R, eps, rng)
        f_orbit_reps = _orbit_reps_normalized(ia, Q, fmembers, Rimg, eps_t,
                                              rng)
        assert len(e_orbit_reps) == len(f_orbit_reps)
        sub_pairs = TwistedDiagonal(_into_group(res, ia.D)).pairs
        sup_pairs = TwistedDiagonal(phi_d).pairs
        res_inv = res.inverse()
        sub_pairs_inv = TwistedDiagonal(_into_group(res_inv, ia.D)).pairs
        sup_pairs_inv = TwistedDiagonal(inv_d).pairs
        tr_up = ia.trace_map(sub_pairs, sup_pairs)
        tr_up_inv = ia.trace_map(sub_pairs_inv, sup_pairs_inv)
        for e_rep, f_rep in zip(e_orbit_reps, f_orbit_reps):
            ge = Point(subgroup=R, index=-1, rep=e_rep, multiplicity=1,
                       local=True)
            gf = Point(subgroup=Rimg, index=-1, rep=f_rep, multiplicity=1,
                       local=True)
            pair = isofusion(ia, res, R, ge, Rimg, gf)
            if pair is None:
                raise Finding("lift_transporter_missing",
                              {"phi": _phi_label(phi), "R_order": R.order})
            s, t = pair
            total_u = A.add(total_u, linalg.matvec(f, tr_up, s))
            total_v = A.add(total_v, linalg.matvec(f, tr_up_inv, t))
    if matched_f_keys != set(F_classes):
        raise Finding("lift_class_cover_mismatch",
                      {"phi": _phi_label(phi)})
    if not (np.array_equal(A.mul(total_v, total_u), A.unit) and
            np.array_equal(A.mul(total_u, total_v), A.unit)):
        raise Finding("lift_product_not_identity", {"phi": _phi_label(phi)})
    rows = ia.brauer(TwistedDiagonal(phi_d)).fixed
    assert rows.contains(total_u), "lifted unit left the fixed module"
    return total_u, total_v


def _orbit_reps_normalized(ia, group, members, R, eps, rng):
    """One representative per group-orbit, conjugated to stabilizer R and
    point eps on the nose."""
    reps = []
    used = set()
    for v, H, pt in members:
        vb = np.asarray(v).tobytes()
        if vb in used:
            continue
        orbit = {np.asarray(ia.conj(g, v)).tobytes() for g in group.elements}
        used.update(orbit)
        chosen = None
        for g in group.elements:
            if H.conjugate(g).key != R.key:
                continue
            w = ia.conj(g, v)
            if _associate_in_fixed(ia, R, w, eps.rep):
                chosen = w
                break
        assert chosen is not None, "orbit cannot be normalized to (R, eps)"
        reps.append(chosen)
    return reps


# ---------------------------------------------------------------------------
# balance
# ---------------------------------------------------------------------------

def intrinsic_balance_report(ia, presystem, rng):
    """Every presystem iso is an isofusion from every source local point,
    and matched local points have equal multiplicities."""
    report = {"isofusion_everywhere": True, "multiplicities_match": True}
    witness = None
    for P, Q, phi in presystem.all_isomorphisms():
        for gamma in local_points(ia, P, rng):
            delta = theta_of_point(ia, phi, P, gamma, Q, rng)
            if delta is None:
                report["isofusion_everywhere"] = False
                witness = witness or {"phi": _phi_label(phi),
                                      "gamma": gamma.index}
                continue
            if gamma.multiplicity != delta.multiplicity:
                report["multiplicities_match"] = False
                witness = witness or {"phi": _phi_label(phi),
                                      "gamma": gamma.index,
                                      "m": (gamma.multiplicity,
                                            delta.multiplicity)}
    report["balanced"] = (report["isofusion_everywhere"] and
                          report["multiplicities_match"])
    if witness:
        report["witness"] = witness
    return report


def ambient_balance_report(ia_hat, ell, presystem, rng):
    """Balance of the corner l.A^.l inside A^ against theta of A^.

    ia_hat is the ambient interior algebra (e.g. the block algebra as an
    interior D-algebra), ell the corner idempotent in ambient coordinates,
    presystem the fixed-point system of the corner.
    """
    report = {"ambient_unital_certified": None, "balanced": True}
    D = ia_hat.D
    ok_units, _ = unital_basis_exists(
        ia_hat, _ambient_presystem(ia_hat), rng)
    report["ambient_unital_certified"] = ok_units
    witness = None
    for P, Q, phi in presystem.all_isomorphisms():
        for gamma_hat in local_points(ia_hat, P, rng):
            delta_hat = theta_of_point(ia_hat, phi, P, gamma_hat, Q, rng)
            if delta_hat is None:
                raise Finding("ambient_theta_undefined",
                              {"phi": _phi_label(phi)})
            m_src = _relative_mult_of_idempotent(ia_hat, P, gamma_hat, ell,
                                                 rng)
            m_dst = _relative_mult_of_idempotent(ia_hat, Q, delta_hat, ell,
                                                 rng)
            if m_src != m_dst:
                report["balanced"] = False
                witness = witness or {"phi": _phi_label(phi),
                                      "gamma_hat": gamma_hat.index,
                                      "m": (m_src, m_dst)}
    if witness:
        report["witness"] = witness
    return report


def _ambient_presystem(ia_hat):
    from .fusion import fixed_point_presystem
    if not hasattr(ia_hat, "_presystem"):
        ia_hat._presystem = fixed_point_presystem(ia_hat, label="fF(ambient)")
    return ia_hat._presystem


def _relative_mult_of_idempotent(ia, P, pt, ell, rng):
    """Members of the point among a primitive decomposition of ell in A^P."""
    parts = refine_idempotent(ia, P, np.asarray(ell), rng)
    return sum(1 for x in parts if _associate_in_fixed(ia, P, x, pt.rep))


def balance_report(ia, presystem, rng, ambient=None, ell=None):
    """Intrinsic balance of ia, plus ambient balance when (ambient, ell)
    describe it as a corner, with the agreement flag between the two
    formulations."""
    out = {"intrinsic": intrinsic_balance_report(ia, presystem, rng)}
    if ambient is not None:
        assert ell is not None, "ambient balance needs the corner idempotent"
        out["ambient"] = ambient_balance_report(ambient, ell, presystem, rng)
        out["ambient_matches_intrinsic"] = (out["intrinsic"]["balanced"] ==
                                     out["ambient"]["balanced"])
    return out


# ---------------------------------------------------------------------------
# the three-way equivalence report
# ---------------------------------------------------------------------------

def equivalence_report(data, rng, thorough=False, exhaustive=False):
    """Independently compute (i) unital basis, (ii) all twisted units,
    (iii) intrinsic and ambient balance; report agreement."""
    from .blocks import source_presystem
    ia = data.ia_S
    F = source_presystem(data)
    out = {}

    basis, neg = build_unital_basis(ia, F, rng, exhaustive=exhaustive)
    out["unital_basis"] = basis is not None
    if neg is not None:
        out["unital_basis_negative"] = neg

    tw_ok, tw_table = has_all_twisted_units(ia, F, rng)
    out["all_twisted_units"] = tw_ok

    intr = intrinsic_balance_report(ia, F, rng)
    out["intrinsic_balance"] = intr["balanced"]
    out["intrinsic_detail"] = intr

    amb = ambient_balance_report(data.ia_B, data.ia_B.A.from_parent(data.ell),
                                 F, rng)
    out["ambient_balance"] = amb["balanced"]
    out["ambient_detail"] = amb
    out["ambient_matches_intrinsic"] = (out["intrinsic_balance"] ==
                                        out["ambient_balance"])

    conditions = [out["unital_basis"], out["all_twisted_units"],
                  out["intrinsic_balance"]]
    out["conditions_agree"] = len(set(conditions)) == 1
    if not out["conditions_agree"] or not out["ambient_matches_intrinsic"]:
        raise Finding("equivalence_conditions_disagree", dict(out))

    if basis is not None:
        full = _unital_characteristic_check(ia, F, basis)
        out["unital_shape_stable"] = full["f_stable"]
        out["unital_shape_characteristic"] = {
            k: full[k] for k in ("bifree", "symmetric", "f_generated",
                                 "f_stable", "sylow", "all")}
        out["iso_realized_by_basis"] = _basis_realization_check(
            ia, F, basis, rng)

    if thorough and len(data.source_candidates) > 1:
        from .fusion import fixed_point_presystem
        agree = True
        for cand in data.source_candidates[1:]:
            ia2 = data.ia_B.corner(data.ia_B.A.from_parent(cand))
            F2 = fixed_point_presystem(ia2, label="fF(alt source)")
            b2, _ = build_unital_basis(ia2, F2, rng)
            t2, _ = has_all_twisted_units(ia2, F2, rng)
            i2 = intrinsic_balance_report(ia2, F2, rng)["balanced"]
            if not (b2 is not None) == t2 == i2 == out["unital_basis"]:
                agree = False
        out["thorough_candidates_agree"] = agree
        if not agree:
            raise Finding("source_candidates_disagree", dict(out))
    return out


def _unital_characteristic_check(ia, F, basis):
    """Full characteristic-condition report of a unital shape against the
    fixed-point fusion system (a unital basis forces stability)."""
    from .bisets import characteristic_report
    return characteristic_report(basis.shape(), F, ia.A.field.p)


def _basis_realization_check(ia, F, basis, rng):
    """With a unital basis, every isofusion is realized by some basis
    element, and each source point has a unique target point."""
    A = ia.A
    for P, Q, phi in F.all_isomorphisms():
        phi_d = _into_group(phi, ia.D)
        bspace = ia.brauer(TwistedDiagonal(phi_d)).fixed
        carriers = [v for v in basis.vectors if bspace.contains(v)]
        if not carriers:
            return False
        for gamma in local_points(ia, P, rng):
            delta = theta_of_point(ia, phi, P, gamma, Q, rng)
            if delta is None:
                return False
            realized = False
            for y in carriers:
                yi = A.mul(A.mul(y, np.asarray(gamma.rep)), A.inv(y))
                if _associate_in_fixed(ia, Q, yi, delta.rep):
                    realized = True
                    break
            if not realized:
                return False
    return True
