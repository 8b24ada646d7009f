"""Interior D-algebras, twisted fixed points, traces and Brauer quotients.

An InteriorAlgebra is an AlgebraContext together with a group map from a
p-group D into its units.  The induced D x D "biaction"
(d1, d2) . a = d1 a d2^{-1} turns the algebra into a permutation module,
and for each subgroup U <= D x D we can take U-fixed points, relative
traces from subgroups, and the Brauer quotient

    A(U) = A^U / sum of trace images from the maximal subgroups of U.

Subgroups of D x D are encoded as permutation pairs; the diagonal
Delta(P) recovers conjugation by P, and for twisted diagonals
Delta(phi, P) the fixed module is the twisted space {a : phi(u).a = a.u}.

Quotients at diagonal subgroups inherit the multiplication of A and are
returned with a full AlgebraContext; quotients at twisted diagonals are
plain spaces linked by the pairing A(psi) x A(phi) -> A(psi o phi).
"""

import numpy as np

from . import linalg
from .algebra import AlgebraContext
from .groups import (PermGroup, TwistedDiagonal, maximal_subgroups,
                     pinv, pmul)


def _pair_perm_group(D):
    """D x D as a permutation group of degree 2 * degree(D), cached on D."""
    if not hasattr(D, "_pair_group"):
        n = D.parent.degree
        gens = []
        for g in D.generating_sequence() or [D.identity]:
            gens.append(tuple(g) + tuple(i + n for i in range(n)))
            gens.append(tuple(range(n)) + tuple(g[i] + n for i in range(n)))
        big = PermGroup(2 * n, gens, label="DxD",
                        order_cap=max(D.order ** 2, 1))
        D._pair_group = big
    return D._pair_group


def encode_pair(D, a, b):
    n = D.parent.degree
    return tuple(a) + tuple(b[i] + n for i in range(n))


def decode_pair(D, x):
    n = D.parent.degree
    return tuple(x[:n]), tuple(x[i] - n for i in range(n, 2 * n))


def pair_subgroup(D, pairs):
    """Subgroup of D x D generated by (and usually equal to) the pairs."""
    big = _pair_perm_group(D)
    return big.generated_subgroup([encode_pair(D, a, b) for a, b in pairs])


class BrauerQuotient:
    """A(U) presented by representative rows inside the U-fixed module."""

    def __init__(self, interior, pairs, fixed_rows, trace_rows, reps,
                 proj_data, phi=None):
        self.interior = interior
        self.pairs = frozenset(pairs)
        self.phi = phi
        self.fixed = linalg.Subspace(interior.A.field, interior.A.dim,
                                     fixed_rows)
        self.traces = linalg.Subspace(interior.A.field, interior.A.dim,
                                      trace_rows)
        self.reps = reps
        self._proj = proj_data
        self._algebra = None

    @property
    def dim(self):
        return self.reps.shape[0]

    def project(self, v, check=True):
        """Class of a U-fixed vector, as coordinates over the reps."""
        f = self.interior.A.field
        pivots, inv, t = self._proj
        c = linalg.matvec(f, inv, np.asarray(v)[pivots])
        if check:
            recon = linalg.vecmat(f, c, np.concatenate(
                [self.traces.basis, self.reps], axis=0)
                if self.traces.dim else self.reps)
            if not np.array_equal(recon, np.asarray(v)):
                raise ValueError("vector is not in the fixed module")
        return c[t:]

    def lift(self, c):
        return linalg.vecmat(self.interior.A.field, np.asarray(c), self.reps)

    def is_zero_class(self, v):
        return self.traces.contains(v)

    def algebra(self):
        """Quotient algebra structure (valid when U.U-products stay fixed,
        i.e. for diagonal subgroups Delta(P))."""
        if self._algebra is None:
            A = self.interior.A
            f = A.field
            r = self.dim
            tensor = np.zeros((r, r, r), dtype=np.int64)
            for i in range(r):
                li = A.lmul_matrix(self.reps[i])
                prods = linalg.matmul(f, li, self.reps.T)
                for j in range(r):
                    tensor[i, j] = self.project(prods[:, j])
            unit = self.project(np.asarray(A.unit))
            Q = AlgebraContext(f, r, mult_tensor=tensor, unit=unit,
                               check=False)
            Q._check_unit()
            self._algebra = Q
        return self._algebra

    def __repr__(self):
        return f"BrauerQuotient(dim {self.dim})"


class InteriorAlgebra:
    """Algebra with a structural map D -> A^x and the induced biaction."""

    def __init__(self, A, D, structural=None, check=True):
        self.A = A
        self.D = D
        n = D.order
        while n % A.field.p == 0:
            n //= A.field.p
        if n != 1:
            raise ValueError("the interior group must be a p-group for the "
                             "coefficient characteristic")
        if structural is None:
            structural = {g: _group_vec(A, g) for g in D.elements}
        self.structural = {g: np.asarray(v, dtype=np.int64)
                           for g, v in structural.items()}
        self._lmats = {}
        self._rmats = {}
        self._bq_cache = {}
        if check:
            self._check_structural()

    def _check_structural(self):
        for g in self.D.elements:
            for h in self.D.elements:
                lhs = self.A.mul(self.structural[g], self.structural[h])
                if not np.array_equal(lhs, self.structural[pmul(g, h)]):
                    raise ValueError("structural map is not multiplicative")
        for g in self.D.elements:
            if not self.A.is_unit(self.structural[g]):
                raise ValueError("structural image is not a unit")

    def lmat(self, g):
        if g not in self._lmats:
            self._lmats[g] = self.A.lmul_matrix(self.structural[g])
        return self._lmats[g]

    def rmat(self, g):
        if g not in self._rmats:
            self._rmats[g] = self.A.rmul_matrix(self.structural[g])
        return self._rmats[g]

    def act(self, d1, d2, v):
        """d1 . v . d2^{-1}."""
        f = self.A.field
        return linalg.matvec(f, self.lmat(d1),
                             linalg.matvec(f, self.rmat(pinv(d2)), v))

    def conj(self, d, v):
        return self.act(d, d, v)

    def left(self, d, v):
        return linalg.matvec(self.A.field, self.lmat(d), v)

    def right(self, v, d):
        return linalg.matvec(self.A.field, self.rmat(d), v)

    # -- fixed points, traces, quotients ---------------------------------

    def fixed_rows(self, pairs):
        """Rows spanning {a : d1 a = a d2 for (d1, d2) generating pairs}."""
        f = self.A.field
        sub = pair_subgroup(self.D, pairs)
        if not hasattr(self, "_fixed_cache"):
            self._fixed_cache = {}
        if sub.key in self._fixed_cache:
            return self._fixed_cache[sub.key]
        gens = sub.generating_sequence()
        if not gens:
            rows = linalg.eye(f, self.A.dim)
        else:
            blocks = []
            for enc in gens:
                d1, d2 = decode_pair(self.D, enc)
                blocks.append(f.sub(self.lmat(d1), self.rmat(d2)))
            rows = linalg.nullspace(f, np.concatenate(blocks, axis=0))
        self._fixed_cache[sub.key] = rows
        return rows

    def trace_map(self, sub_pairs, super_pairs):
        """Relative trace matrix tr: A^V -> A^U between pair subgroups."""
        f = self.A.field
        V = pair_subgroup(self.D, sub_pairs)
        U = pair_subgroup(self.D, super_pairs)
        assert V.key <= U.key, "trace needs V <= U"
        out = linalg.zeros(self.A.dim, self.A.dim)
        for enc in U.left_coset_reps(V):
            d1, d2 = decode_pair(self.D, enc)
            m = linalg.matmul(f, self.lmat(d1), self.rmat(pinv(d2)))
            out = f.add(out, m)
        return out

    def relative_trace(self, sub_pairs, super_pairs, v):
        return linalg.matvec(self.A.field,
                             self.trace_map(sub_pairs, super_pairs), v)

    def brauer(self, td_or_pairs):
        """Brauer quotient at a subgroup of D x D (cached)."""
        phi = None
        if isinstance(td_or_pairs, TwistedDiagonal):
            phi = td_or_pairs.phi
            pairs = td_or_pairs.pairs
        else:
            pairs = frozenset(td_or_pairs)
        key = pairs
        if key in self._bq_cache:
            return self._bq_cache[key]
        f = self.A.field
        fixed = self.fixed_rows(pairs)
        U = pair_subgroup(self.D, pairs)
        trace_imgs = []
        for V in maximal_subgroups(U):
            v_pairs = [decode_pair(self.D, e) for e in V.elements]
            sub_fixed = self.fixed_rows(v_pairs)
            tm = self.trace_map(v_pairs, pairs)
            img = linalg.matmul(f, tm, sub_fixed.T).T
            trace_imgs.append(img)
        if trace_imgs:
            traces = linalg.rref(f, np.concatenate(trace_imgs, axis=0))[0]
        else:
            traces = linalg.zeros(0, self.A.dim)
        # pivot-complement of the traces inside the fixed module
        chosen = []
        acc = traces
        for t in range(fixed.shape[0]):
            cand = np.concatenate([acc, fixed[t:t + 1]], axis=0)
            if linalg.rank(f, cand) > acc.shape[0]:
                chosen.append(fixed[t])
                acc = linalg.rref(f, cand)[0]
        reps = np.array(chosen, dtype=np.int64) if chosen \
            else linalg.zeros(0, self.A.dim)
        stacked = np.concatenate([traces, reps], axis=0) if traces.size \
            else reps
        if stacked.size:
            pivots = linalg.rref(f, stacked)[1]
            inv = linalg.inverse(f, stacked[:, pivots].T)
        else:
            pivots, inv = [], linalg.zeros(0, 0)
        bq = BrauerQuotient(self, pairs, fixed, traces, reps,
                            (pivots, inv, traces.shape[0]), phi=phi)
        self._bq_cache[key] = bq
        return bq

    def brauer_at(self, P):
        """Standard Brauer quotient A(P) at the diagonal Delta(P)."""
        from .groups import diagonal
        return self.brauer(diagonal(P, self.D))

    def twisted(self, phi):
        """Twisted Brauer quotient A(phi) at Delta(phi, P)."""
        return self.brauer(TwistedDiagonal(phi))

    def fixed_subalgebra(self, P):
        """A^P (conjugation-fixed) as a subalgebra context."""
        rows = self.fixed_rows([(g, g) for g in P.generating_sequence()]
                               or [(P.identity, P.identity)])
        return self.A.subalgebra(rows)

    def corner(self, e, structural_factor=True):
        """Interior algebra on the corner e.A.e; structural map d -> d.e.

        e must be fixed by the conjugation action of D.
        """
        C = self.A.corner(e)
        struct = {}
        for g in self.D.elements:
            v = self.A.mul(self.structural[g], e)
            struct[g] = C.from_parent(v)
        return InteriorAlgebra(C, self.D, structural=struct)


def _group_vec(A, g):
    v = A.zero()
    v[A.element_index[g]] = 1
    return v


def quotient_product(bq_left, bq_right, c_left, c_right, bq_out=None):
    """Pairing A(psi) x A(phi) -> A(psi o phi) induced by multiplication.

    bq_left is at Delta(psi, Q), bq_right at Delta(phi, P) with
    phi(P) <= Q; the result is the class of lift(c_left) * lift(c_right)
    in A(psi o phi).
    """
    interior = bq_left.interior
    assert bq_right.interior is interior
    psi, phi = bq_left.phi, bq_right.phi
    assert psi is not None and phi is not None, "need twisted diagonals"
    assert phi.image().key <= psi.domain.key, "pairing is not composable"
    comp = psi.compose(phi.corestrict(psi.domain))
    if bq_out is None:
        bq_out = interior.brauer(TwistedDiagonal(comp))
    w = interior.A.mul(bq_left.lift(c_left), bq_right.lift(c_right))
    return bq_out.project(w), bq_out


def fixed_subspace(ia, td):
    """Rows spanning the twisted fixed module of Delta(phi, P)."""
    pairs = td.pairs if isinstance(td, TwistedDiagonal) else td
    return ia.fixed_rows(pairs)


def relative_trace(ia, sub_td, super_td, a):
    """tr_V^U(a) for twisted-diagonal (or pair-set) subgroups V <= U."""
    sub = sub_td.pairs if isinstance(sub_td, TwistedDiagonal) else sub_td
    sup = super_td.pairs if isinstance(super_td, TwistedDiagonal) else super_td
    fixed = ia.fixed_rows(sub)
    if not linalg.Subspace(ia.A.field, ia.A.dim, fixed).contains(a):
        raise ValueError("element is not fixed by the lower subgroup")
    return ia.relative_trace(sub, sup, a)


def brauer_quotient(ia, td_or_pairs):
    """The Brauer quotient A(U); same object the interior algebra caches."""
    return ia.brauer(td_or_pairs)
