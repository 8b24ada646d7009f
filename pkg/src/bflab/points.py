"""Points, local points, multiplicities, and local invariant decompositions.

A point of A^P is a conjugacy class of primitive idempotents of the
P-fixed subalgebra; it is local when its Brauer image at P survives.
All point data for one interior algebra is cached on the algebra: a
fixed primitive decomposition of 1 in each A^P, the grouping of its
pieces into points, and Brauer locality flags.

A local invariant decomposition under P is a P-stable orthogonal
decomposition of 1 whose members are primitive and local in the fixed
algebra of their stabilizers.  It is built by a worklist refinement:
non-primitive members split inside A^(stabilizer); primitive non-local
members descend to a maximal subgroup R found by Rosenberg's lemma and
are replaced by a full free orbit constructed from the semisimple
quotient (free orbits of blocks, plus free-module splittings of fixed
matrix blocks) and lifted along the radical.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .groups import Subgroup, maximal_subgroups, all_subgroups, pinv
from .idempotents import (NonSplitError, is_primitive,
                          primitive_decomposition, quotient_algebra)
from .radical import radical_rows


@dataclass
class Point:
    """A point of A^P: class of primitive idempotents, plus locality."""
    subgroup: Subgroup
    index: int
    rep: np.ndarray
    multiplicity: int
    local: bool

    def __repr__(self):
        tag = "local " if self.local else ""
        return (f"Point({tag}|P|={self.subgroup.order}, "
                f"#{self.index}, m={self.multiplicity})")


@dataclass(frozen=True)
class PointedGroup:
    subgroup_key: frozenset
    point_index: int


def _cache(ia):
    if not hasattr(ia, "_points_cache"):
        ia._points_cache = {"ctx": {}, "decomp": {}, "points": {},
                            "refine": {}, "prim": {}, "local": {}}
    return ia._points_cache


def _is_primitive_cached(ia, H, v):
    c = _cache(ia)["prim"]
    key = (H.key, np.asarray(v).tobytes())
    if key not in c:
        ctx = fixed_ctx(ia, H)
        c[key] = is_primitive(ctx, ctx.from_parent(v))
    return c[key]


def _is_local_cached(ia, H, v):
    c = _cache(ia)["local"]
    key = (H.key, np.asarray(v).tobytes())
    if key not in c:
        c[key] = is_local_idempotent(ia, H, v)
    return c[key]


def fixed_ctx(ia, P):
    c = _cache(ia)["ctx"]
    if P.key not in c:
        c[P.key] = ia.fixed_subalgebra(P)
    return c[P.key]


def unit_decomposition(ia, P, rng):
    """Fixed primitive decomposition of 1 in A^P (A-coordinates), cached."""
    c = _cache(ia)["decomp"]
    if P.key not in c:
        ctx = fixed_ctx(ia, P)
        parts = [ctx.to_parent(v)
                 for v in primitive_decomposition(ctx, ctx.unit, rng)]
        c[P.key] = parts
    return c[P.key]


def is_local_idempotent(ia, P, idem):
    bq = ia.brauer_at(P)
    return not bq.is_zero_class(idem)


def _associate_in_fixed(ia, P, x, y):
    ctx = fixed_ctx(ia, P)
    from .idempotents import are_associate
    return are_associate(ctx, ctx.from_parent(x), ctx.from_parent(y))


def points(ia, P, rng):
    """All points of A^P from the cached decomposition, locals flagged."""
    c = _cache(ia)["points"]
    if P.key in c:
        return c[P.key]
    parts = unit_decomposition(ia, P, rng)
    classes = []
    for x in parts:
        for cls in classes:
            if _associate_in_fixed(ia, P, cls[0], x):
                cls.append(x)
                break
        else:
            classes.append([x])
    out = []
    for idx, cls in enumerate(classes):
        out.append(Point(subgroup=P, index=idx, rep=cls[0],
                         multiplicity=len(cls),
                         local=is_local_idempotent(ia, P, cls[0])))
    c[P.key] = out
    return out


def local_points(ia, P, rng):
    return [pt for pt in points(ia, P, rng) if pt.local]


def point_of(ia, P, idem, rng):
    """The point of A^P containing the primitive idempotent idem."""
    for pt in points(ia, P, rng):
        if _associate_in_fixed(ia, P, pt.rep, idem):
            return pt
    raise ValueError("idempotent matches no point (is it primitive in A^P?)")


def multiplicity(ia, P, pt_or_rep, rng):
    pt = pt_or_rep if isinstance(pt_or_rep, Point) \
        else point_of(ia, P, pt_or_rep, rng)
    return pt.multiplicity


def refine_idempotent(ia, R, idem, rng):
    """Cached primitive decomposition of idem inside A^R."""
    c = _cache(ia)["refine"]
    key = (R.key, np.asarray(idem).tobytes())
    if key not in c:
        ctx = fixed_ctx(ia, R)
        parts = primitive_decomposition(ctx, ctx.from_parent(idem), rng)
        c[key] = [ctx.to_parent(v) for v in parts]
    return c[key]


def relative_multiplicity(ia, Rp, pt_prime, R, pt, rng):
    """m(R'_eps', R_eps): members of eps' in a decomposition of e in eps."""
    assert Rp.key <= R.key, "relative multiplicity needs R' <= R"
    parts = refine_idempotent(ia, Rp, pt.rep, rng)
    return sum(1 for x in parts
               if _associate_in_fixed(ia, Rp, x, pt_prime.rep))


def pointed_leq(ia, Q, pt_delta, P, pt_gamma, rng):
    """Q_delta <= P_gamma: some summand of i_P in A^Q lies in delta."""
    if not Q.key <= P.key:
        return False
    return relative_multiplicity(ia, Q, pt_delta, P, pt_gamma, rng) > 0


def brown_poset(ia, P, rng):
    """All local pointed groups (R, point) for R <= P."""
    out = []
    for R in all_subgroups(P):
        for pt in local_points(ia, R, rng):
            out.append((R, pt))
    return out


def conjugate_point(ia, P, pt, g, rng):
    """^g(P_pt) as a (subgroup, Point) pair; g from the interior group."""
    Pg = P.conjugate(g)
    rep_g = ia.conj(g, pt.rep)
    return Pg, point_of(ia, Pg, rep_g, rng)


# ---------------------------------------------------------------------------
# local invariant decompositions
# ---------------------------------------------------------------------------

class LocalDecompositionError(RuntimeError):
    """The refinement loop could not produce an exact free orbit; this
    signals a primitivity/split bug rather than a mathematical obstruction."""


def _stabilizer(ia, P, v):
    return P.subgroup(g for g in P.elements
                      if np.array_equal(ia.conj(g, v), np.asarray(v)))


def _corner_fixed_ctx(ia, H_or_rows, e):
    """Subalgebra e.(A^R).e with unit e, as a context view of A."""
    A = ia.A
    f = A.field
    rows = ia.fixed_rows([(g, g) for g in H_or_rows.generating_sequence()]
                         or [(H_or_rows.identity, H_or_rows.identity)])
    le = A.lmul_matrix(e)
    re = A.rmul_matrix(e)
    sandwiched = linalg.matmul(f, le, linalg.matmul(f, re, rows.T)).T
    rows2 = linalg.rref(f, sandwiched)[0]
    return A.subalgebra(rows2, unit=np.asarray(e))


def _sigma_matrix(ia, ctx, x):
    """Conjugation by x as a matrix on a subalgebra view ctx."""
    f = ia.A.field
    cols = []
    for i in range(ctx.dim):
        v = ctx.to_parent(ctx.basis_vector(i))
        cols.append(ctx.from_parent(ia.conj(x, v)))
    return np.array(cols, dtype=np.int64).T


def _matrix_power_apply(f, S, v, a):
    out = np.asarray(v)
    for _ in range(a):
        out = linalg.matvec(f, S, out)
    return out


def _semisimple_orbit_idempotent(B, S, p, rng):
    """sigma-free orthogonal idempotent in the SEMISIMPLE algebra B.

    S is the matrix of an order-p algebra automorphism sigma of B with
    1_B in the image of the trace sum id + sigma + ... + sigma^(p-1).
    Returns jbar with {sigma^a(jbar)} orthogonal and summing to 1_B.
    """
    f = B.field
    from .idempotents import block_idempotents
    blocks = block_idempotents(B, rng)
    taken = [False] * len(blocks)
    jbar = B.zero()
    for idx, blk in enumerate(blocks):
        if taken[idx]:
            continue
        orbit = [idx]
        cur = linalg.matvec(f, S, blk)
        while not np.array_equal(cur, blk):
            hit = next(t for t, other in enumerate(blocks)
                       if np.array_equal(cur, other))
            orbit.append(hit)
            cur = linalg.matvec(f, S, cur)
        for t in orbit:
            taken[t] = True
        if len(orbit) == p:
            jbar = B.add(jbar, blk)
        elif len(orbit) == 1:
            jbar = B.add(jbar, _fixed_block_orbit_idempotent(B, S, blk, p, rng))
        else:
            raise LocalDecompositionError(
                f"block orbit of size {len(orbit)} under order-{p} action")
    return jbar


def _fixed_block_orbit_idempotent(B, S, blk, p, rng):
    """Free-orbit idempotent inside a sigma-fixed simple block of B."""
    f = B.field
    Qb = B.corner(blk)
    # sigma restricted to the corner
    cols = []
    for i in range(Qb.dim):
        v = Qb.to_parent(Qb.basis_vector(i))
        cols.append(Qb.from_parent(linalg.matvec(f, S, v)))
    Sb = np.array(cols, dtype=np.int64).T
    # sigma = conjugation by g: solve sigma(y).g = g.y for all basis y
    constraints = []
    for i in range(Qb.dim):
        y = Qb.basis_vector(i)
        sy = linalg.matvec(f, Sb, y)
        constraints.append(f.sub(Qb.rmul_matrix(y), Qb.lmul_matrix(sy)))
    sols = linalg.nullspace(f, np.concatenate(constraints, axis=0))
    g = None
    for t in range(sols.shape[0]):
        if Qb.is_unit(sols[t]):
            g = sols[t]
            break
    if g is None:
        raise NonSplitError("automorphism of a simple block is not inner "
                            "(field too small to split the block)")
    gp = Qb.power(g, p)
    # normalize so g^p = 1 (g^p is a scalar by Schur)
    scal = None
    for i in range(Qb.dim):
        if Qb.unit[i]:
            scal = f.div(int(gp[i]), int(Qb.unit[i]))
            break
    assert scal is not None and scal != 0 and \
        np.array_equal(gp, Qb.scale(scal, Qb.unit)), "g^p is not scalar"
    mu = _pth_root_scalar(f, f.inv(scal), p)
    g = Qb.scale(mu, g)
    assert np.array_equal(Qb.power(g, p), Qb.unit), "normalization failed"
    # natural module V = Qb.f0 for a primitive idempotent f0
    f0 = primitive_decomposition(Qb, Qb.unit, rng, verify=False)[0]
    vrows = linalg.rref(f, linalg.matmul(
        f, Qb.rmul_matrix(f0), linalg.eye(f, Qb.dim).T).T)[0]
    n = vrows.shape[0]
    assert n * n == Qb.dim, "block is not split simple"
    Vctx_extract = _row_extractor(f, vrows)
    # action of g on V in the vrows basis
    Gmat = linalg.zeros(n, n)
    for i in range(n):
        img = Qb.mul(g, vrows[i])
        Gmat[:, i] = Vctx_extract(img)
    eta = f.sub(Gmat, linalg.eye(f, n))
    assert n % p == 0 and linalg.nullspace(f, eta).shape[0] == n // p, \
        "natural module is not free over <g> (trace promise violated)"
    # complement of ker(eta^(p-1)) = im(eta) gives a free basis
    etapow = linalg.eye(f, n)
    for _ in range(p - 1):
        etapow = linalg.matmul(f, etapow, eta)
    kern = linalg.nullspace(f, etapow)
    comp = []
    acc = kern
    for i in range(n):
        cand = np.concatenate([acc, linalg.eye(f, n)[i:i + 1]], axis=0)
        if linalg.rank(f, cand) > acc.shape[0]:
            comp.append(i)
            acc = linalg.rref(f, cand)[0]
    U = linalg.eye(f, n)[comp]
    # basis g^a u_i of V; projection onto a = 0 component
    blocks_rows = []
    for a in range(p):
        rows = U.copy()
        for _ in range(a):
            rows = linalg.matmul(f, Gmat, rows.T).T
        blocks_rows.append(rows)
    full = np.concatenate(blocks_rows, axis=0)
    inv = linalg.inverse(f, full.T)
    assert inv is not None, "free basis construction failed"
    r = U.shape[0]
    proj_mat = linalg.matmul(f, full[:r].T, inv[:r])
    # back to an element of Qb: solve sum_e x_e . (L_e restricted to V) = proj
    cols = [_left_action_matrix(f, Qb, vrows, Vctx_extract, e).reshape(-1)
            for e in range(Qb.dim)]
    jb = linalg.solve(f, np.array(cols).T, proj_mat.reshape(-1))
    assert jb is not None, "projection is not realized in the block"
    assert Qb.is_idempotent(jb), "projection element not idempotent"
    return Qb.to_parent(jb)


def _left_action_matrix(f, Qb, vrows, extract, e):
    n = vrows.shape[0]
    out = linalg.zeros(n, n)
    base = Qb.basis_vector(e)
    for i in range(n):
        out[:, i] = extract(Qb.mul(base, vrows[i]))
    return out


def _row_extractor(f, rows):
    pivots = linalg.rref(f, rows)[1]
    inv = linalg.inverse(f, rows[:, pivots].T)

    def extract(v):
        return linalg.matvec(f, inv, np.asarray(v)[pivots])
    return extract


def _pth_root_scalar(f, a, p):
    """mu with mu^p = a in GF(p^m)."""
    return f.pow(a, p ** ((f.m - 1) % max(f.m, 1))) if f.m > 1 else a


def _orbit_idempotent(ia, B, S, p, rng):
    """Idempotent j in B with free orthogonal sigma-orbit summing to 1_B.

    B is a corner-of-fixed-points view, S the matrix of the order-p
    automorphism sigma, with the promise 1_B in im(id + ... + sigma^(p-1)).
    """
    f = B.field
    nrows = radical_rows(B)
    Q = quotient_algebra(B, nrows)
    Sq = linalg.zeros(Q.dim, Q.dim)
    for i in range(Q.dim):
        Sq[:, i] = Q.proj(linalg.matvec(f, S, Q.lift(Q.basis_vector(i))))
    jbar = _semisimple_orbit_idempotent(Q, Sq, p, rng)
    x = Q.lift(jbar)

    def trace(v):
        acc = np.asarray(v)
        out = acc
        for _ in range(p - 1):
            acc = linalg.matvec(f, S, acc)
            out = f.add(out, acc)
        return out

    # exact sum normalization: d is sigma-fixed, so (1 + d)^-1 is too
    d = B.sub(trace(x), B.unit)
    corr = B.inv(B.add(B.unit, d))
    x = B.mul(corr, x)
    assert np.array_equal(trace(x), B.unit)

    if p == 2:
        # squaring preserves {x : x + sigma(x) = 1} and converges
        for _ in range(2 * B.dim + 4):
            if B.is_idempotent(x):
                break
            x = B.mul(x, x)
        if _verify_orbit(ia, B, S, x, p):
            return x
        raise LocalDecompositionError("char-2 orbit lift failed")

    # odd p: linearized corrections for orthogonality, sum kept exact;
    # restart from randomized sum-exact shifts if Newton hits a
    # degenerate point
    shift_rows = None
    x0 = x
    for attempt in range(6):
        if attempt == 0:
            x = x0
        else:
            if shift_rows is None:
                shift_rows = _sum_exact_radical_shifts(f, B, S, nrows, p)
            if shift_rows.shape[0] == 0:
                break
            coeffs = f.random_elements(rng, shift_rows.shape[0])
            x = B.add(x0, linalg.vecmat(f, coeffs, shift_rows))
        for _ in range(8 * B.dim + 16):
            if _verify_orbit(ia, B, S, x, p):
                return x
            x = _odd_orbit_correction(f, B, S, trace, x, p)
            if x is None:
                break
    raise LocalDecompositionError("odd-p orbit lift failed")


def _sum_exact_radical_shifts(f, B, S, radical, p):
    """Rows of J(B) combos killed by the trace sum id + sigma + ..."""
    if radical.shape[0] == 0:
        return radical
    tsum = linalg.eye(f, B.dim)
    acc = linalg.eye(f, B.dim)
    for _ in range(p - 1):
        acc = linalg.matmul(f, S, acc)
        tsum = f.add(tsum, acc)
    combos = linalg.nullspace(f, linalg.matmul(f, tsum, radical.T))
    return linalg.matmul(f, combos, radical)


def _verify_orbit(ia, B, S, x, p):
    f = B.field
    if not B.is_idempotent(x):
        return False
    orbit = [np.asarray(x)]
    for _ in range(p - 1):
        orbit.append(linalg.matvec(f, S, orbit[-1]))
    total = B.zero()
    for v in orbit:
        total = B.add(total, v)
    if not np.array_equal(total, B.unit):
        return False
    for a in range(p):
        for b in range(p):
            if a != b and np.any(B.mul(orbit[a], orbit[b])):
                return False
    return True


def _odd_orbit_correction(f, B, S, trace, x, p):
    """One Newton step: solve for delta with trace(delta) = 0 killing the
    current orthogonality/idempotency defects to first order."""
    n = B.dim
    orbit = [np.asarray(x)]
    for _ in range(p - 1):
        orbit.append(linalg.matvec(f, S, orbit[-1]))
    Smats = [linalg.eye(f, n)]
    for _ in range(p - 1):
        Smats.append(linalg.matmul(f, S, Smats[-1]))
    rows = []
    rhs = []
    # idempotency: x d + d x - d = -(x^2 - x)
    lx = B.lmul_matrix(x)
    rx = B.rmul_matrix(x)
    rows.append(f.sub(f.add(lx, rx), linalg.eye(f, n)))
    rhs.append(f.neg(B.sub(B.mul(x, x), x)))
    # orthogonality vs each shifted copy: x sigma^a(d) + d sigma^a(x) = -x sigma^a(x)
    for a in range(1, p):
        ma = f.add(linalg.matmul(f, lx, Smats[a]),
                   B.rmul_matrix(orbit[a]))
        rows.append(ma)
        rhs.append(f.neg(B.mul(x, orbit[a])))
        # sigma^a(x) d + sigma^a(d) x = -(sigma^a(x) x)
        mb = f.add(B.lmul_matrix(orbit[a]),
                   linalg.matmul(f, rx, Smats[a]))
        rows.append(mb)
        rhs.append(f.neg(B.mul(orbit[a], x)))
    # sum preservation: trace(d) = 0
    tsum = Smats[0]
    for a in range(1, p):
        tsum = f.add(tsum, Smats[a])
    rows.append(tsum)
    rhs.append(B.zero())
    big = np.concatenate(rows, axis=0)
    target = np.concatenate(rhs, axis=0)
    delta = linalg.solve(f, big, target)
    if delta is None:
        return None
    return B.add(x, delta)


def local_invariant_decomposition(ia, P, rng):
    """P-stable orthogonal decomposition of 1 into primitive local pieces.

    Returns a list of (idempotent, stabilizer) pairs; the idempotent set
    is closed under P-conjugation and each piece is primitive local in
    the fixed algebra of its stabilizer.
    """
    system = [ia.A.unit.copy()]
    guard = 0
    while True:
        guard += 1
        if guard > 4 * ia.A.dim + 16:
            raise LocalDecompositionError("refinement loop did not terminate")
        tagged = [(v, _stabilizer(ia, P, v)) for v in system]
        work = None
        for v, H in tagged:
            if not _is_primitive_cached(ia, H, v):
                work = (v, H, "split")
                break
            if not _is_local_cached(ia, H, v):
                work = (v, H, "descend")
                break
        if work is None:
            break
        v, H, kind = work
        if kind == "split":
            pieces = refine_idempotent(ia, H, v, rng)
        else:
            pieces = _descend_orbit(ia, H, v, rng)
        system = _replace_orbit(ia, P, system, v, H, pieces)
    out = [(v, _stabilizer(ia, P, v)) for v in system]
    _verify_lid(ia, P, out)
    return out


def _descend_orbit(ia, H, e, rng):
    """Free orbit refinement of a primitive non-local e in A^H."""
    f = ia.A.field
    for R in maximal_subgroups(H):
        B = _corner_fixed_ctx(ia, R, e)
        # does e lie in the trace image tr_R^H(B)?
        reps = H.left_coset_reps(R)
        tmat = linalg.zeros(ia.A.dim, ia.A.dim)
        for c in reps:
            m = linalg.matmul(f, ia.lmat(c), ia.rmat(pinv(c)))
            tmat = f.add(tmat, m)
        img = linalg.matmul(f, tmat, B.embed.T).T
        if linalg.solve(f, img.T, np.asarray(e)) is None:
            continue
        x = next(c for c in H.elements if c not in R.key)
        S = _sigma_matrix(ia, B, x)
        p = len(reps)
        j = _orbit_idempotent(ia, B, S, p, rng)
        jA = B.to_parent(j)
        orbit = [jA]
        for _ in range(p - 1):
            orbit.append(ia.conj(x, orbit[-1]))
        return orbit
    raise LocalDecompositionError(
        "no maximal subgroup carries the trace of a non-local primitive")


def _replace_orbit(ia, P, system, v, H, pieces):
    """Swap the P-orbit of v for the conjugated pieces."""
    out = []
    orbit_seen = set()
    for w in system:
        mover = None
        for q in P.elements:
            if np.array_equal(ia.conj(q, v), np.asarray(w)):
                mover = q
                break
        if mover is None:
            out.append(w)
            continue
        wb = np.asarray(w).tobytes()
        if wb in orbit_seen:
            raise LocalDecompositionError("orbit bookkeeping degenerated")
        orbit_seen.add(wb)
        for piece in pieces:
            out.append(ia.conj(mover, piece))
    return out


def _verify_lid(ia, P, tagged):
    A = ia.A
    total = A.zero()
    for v, H in tagged:
        total = A.add(total, v)
        assert _is_primitive_cached(ia, H, v), "piece not primitive"
        assert _is_local_cached(ia, H, v), "piece not local"
    assert np.array_equal(total, A.unit), "pieces do not sum to 1"
    vecs = [v for v, _ in tagged]
    for a in range(len(vecs)):
        for b in range(len(vecs)):
            if a != b and np.any(A.mul(vecs[a], vecs[b])):
                raise AssertionError("pieces not orthogonal")
    keys = {np.asarray(v).tobytes() for v in vecs}
    for v, _ in tagged:
        for g in P.elements:
            if np.asarray(ia.conj(g, v)).tobytes() not in keys:
                raise AssertionError("system not closed under P")
