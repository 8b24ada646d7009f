"""Finite-dimensional unital algebras over a finite field, by structure data.

An AlgebraContext owns a basis and enough data to multiply: either a
dense structure tensor mult[i, j, :] = b_i * b_j, or (for group
algebras) an index table driving O(dim^2) convolution.  Elements are
bare numpy coefficient vectors; all operations live on the context.

Subalgebras (fixed-point algebras, corners e.A.e, centers) are
AlgebraContexts carrying an `embed` matrix whose rows express their
basis inside the parent, plus an exact coordinate extractor.
"""

import numpy as np

from . import linalg
from .groups import pmul, pinv


class AlgebraError(ValueError):
    pass


class AlgebraContext:
    def __init__(self, field, dim, labels=None, mult_tensor=None,
                 group_ltable=None, group_rtable=None, unit=None,
                 parent=None, embed=None, check=True):
        self.field = field
        self.dim = dim
        self.labels = labels if labels is not None else list(range(dim))
        self.mult_tensor = mult_tensor
        self._ltable = group_ltable
        self._rtable = group_rtable
        self.unit = None if unit is None else np.asarray(unit, dtype=np.int64)
        self.parent = parent
        self.embed = embed          # rows: our basis in parent coordinates
        self._extract = None
        if parent is not None:
            self._prepare_extractor()
        if check and self.unit is not None:
            self._check_unit()
            # views and quotients of associative algebras are associative
            # for free; only raw structure data needs the triple check
            if self.mult_tensor is not None and parent is None:
                self._check_associative()

    # -- basic element operations ----------------------------------------

    def zero(self):
        return np.zeros(self.dim, dtype=np.int64)

    def basis_vector(self, i):
        v = self.zero()
        v[i] = 1
        return v

    def scale(self, s, x):
        return self.field.mul(int(s), np.asarray(x, dtype=np.int64))

    def add(self, x, y):
        return self.field.add(np.asarray(x), np.asarray(y))

    def sub(self, x, y):
        return self.field.sub(np.asarray(x), np.asarray(y))

    def lmul_matrix(self, x):
        """Matrix L with L @ y = x * y."""
        x = np.asarray(x, dtype=np.int64)
        f = self.field
        if self._ltable is not None:
            return x[self._ltable]
        t = f.mul(x[:, None, None], self.mult_tensor)
        return f.vec_sum(t, axis=0).T

    def rmul_matrix(self, y):
        """Matrix R with R @ x = x * y."""
        y = np.asarray(y, dtype=np.int64)
        f = self.field
        if self._rtable is not None:
            return y[self._rtable]
        t = f.mul(y[None, :, None], self.mult_tensor)
        return f.vec_sum(t, axis=1).T

    def mul(self, x, y):
        return linalg.matvec(self.field, self.lmul_matrix(x), y)

    def mul_many(self, xs):
        acc = xs[0]
        for x in xs[1:]:
            acc = self.mul(acc, x)
        return acc

    def power(self, x, n):
        acc = self.unit.copy()
        base = np.asarray(x)
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    def is_unit(self, x):
        return linalg.rank(self.field, self.lmul_matrix(x)) == self.dim

    def inv(self, x):
        z = linalg.solve(self.field, self.lmul_matrix(x), self.unit)
        if z is None:
            raise AlgebraError("element is not a unit")
        assert np.array_equal(self.mul(z, x), self.unit), "one-sided inverse"
        return z

    def is_idempotent(self, e):
        return np.array_equal(self.mul(e, e), np.asarray(e))

    def commutes(self, x, y):
        return np.array_equal(self.mul(x, y), self.mul(y, x))

    def random_element(self, rng):
        return self.field.random_elements(rng, self.dim)

    def basis_matrix(self):
        return linalg.eye(self.field, self.dim)

    # -- parent coordinate plumbing ---------------------------------------

    def _prepare_extractor(self):
        f = self.field
        pivots = linalg.rref(f, self.embed)[1]
        inv = linalg.inverse(f, self.embed[:, pivots].T)
        assert inv is not None, "embed rows are dependent"
        self._extract = (pivots, inv)

    def to_parent(self, x):
        return linalg.vecmat(self.field, np.asarray(x), self.embed)

    def from_parent(self, v, check=True):
        """Coordinates of a parent vector lying in our span."""
        pivots, inv = self._extract
        c = linalg.matvec(self.field, inv, np.asarray(v)[pivots])
        if check and not np.array_equal(self.to_parent(c), np.asarray(v)):
            raise AlgebraError("vector is outside the subalgebra")
        return c

    def span_contains(self, v):
        pivots, inv = self._extract
        c = linalg.matvec(self.field, inv, np.asarray(v)[pivots])
        return np.array_equal(self.to_parent(c), np.asarray(v))

    def to_root(self, x):
        """Coordinates in the outermost ancestor algebra."""
        ctx, v = self, np.asarray(x)
        while ctx.parent is not None:
            v = ctx.to_parent(v)
            ctx = ctx.parent
        return v

    def root(self):
        ctx = self
        while ctx.parent is not None:
            ctx = ctx.parent
        return ctx

    # -- derived algebras --------------------------------------------------

    def subalgebra(self, rows, unit=None, check=True):
        """Subalgebra on given independent rows (parent coordinates)."""
        f = self.field
        rows = np.asarray(rows, dtype=np.int64)
        r = rows.shape[0]
        unit = self.unit if unit is None else np.asarray(unit)
        sub = AlgebraContext(f, r, mult_tensor=None, unit=None,
                             parent=self, embed=rows, check=False)
        tensor = np.zeros((r, r, r), dtype=np.int64)
        for i in range(r):
            li = self.lmul_matrix(rows[i])
            prods = linalg.matmul(f, li, rows.T)   # columns: b_i * b_j
            for j in range(r):
                tensor[i, j] = sub.from_parent(prods[:, j], check=check)
        sub.mult_tensor = tensor
        sub.unit = sub.from_parent(unit, check=check)
        sub._check_unit()
        return sub

    def corner(self, e, check=True):
        """The corner algebra e.A.e with unit e."""
        f = self.field
        assert self.is_idempotent(e), "corner needs an idempotent"
        m = linalg.matmul(f, self.lmul_matrix(e), self.rmul_matrix(e))
        rows = linalg.rref(f, m.T)[0]
        return self.subalgebra(rows, unit=e, check=check)

    def center_rows(self):
        f = self.field
        stacked = []
        for i in range(self.dim):
            b = self.basis_vector(i)
            stacked.append(f.sub(self.lmul_matrix(b), self.rmul_matrix(b)))
        return linalg.nullspace(f, np.concatenate(stacked, axis=0))

    def center(self):
        return self.subalgebra(self.center_rows())

    # -- invariant checks ---------------------------------------------------

    def _check_unit(self):
        u = self.unit
        for i in range(self.dim):
            b = self.basis_vector(i)
            if not (np.array_equal(self.mul(u, b), b)
                    and np.array_equal(self.mul(b, u), b)):
                raise AlgebraError("unit is not a two-sided identity")

    def _check_associative(self, sample_cap=200):
        import itertools
        n = self.dim
        if n <= 12:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = np.random.default_rng(1)
            triples = (tuple(rng.integers(0, n, 3)) for _ in range(sample_cap))
        for i, j, k in triples:
            bi, bj, bk = (self.basis_vector(t) for t in (i, j, k))
            left = self.mul(self.mul(bi, bj), bk)
            right = self.mul(bi, self.mul(bj, bk))
            if not np.array_equal(left, right):
                raise AlgebraError(f"associativity fails at {(i, j, k)}")

    def __repr__(self):
        return f"AlgebraContext(dim {self.dim} over {self.field})"


def group_algebra(G, field):
    """kG with basis the group elements (their sorted order)."""
    elements = G.elements
    n = len(elements)
    index = {g: i for i, g in enumerate(elements)}
    ltable = np.zeros((n, n), dtype=np.int64)
    rtable = np.zeros((n, n), dtype=np.int64)
    for k, gk in enumerate(elements):
        for j, gj in enumerate(elements):
            ltable[k, j] = index[pmul(gk, pinv(gj))]
            rtable[k, j] = index[pmul(pinv(gj), gk)]
    unit = np.zeros(n, dtype=np.int64)
    unit[index[G.identity]] = 1
    ctx = AlgebraContext(field, n, labels=list(elements),
                         group_ltable=ltable, group_rtable=rtable,
                         unit=unit, check=False)
    ctx.group = G
    ctx.element_index = index
    return ctx


def group_element_vector(A, g):
    v = A.zero()
    v[A.element_index[g]] = 1
    return v


def group_conjugation_matrix(A, g):
    """Basis permutation matrix of x -> g x g^-1 on a group algebra."""
    n = A.dim
    gi = pinv(g)
    m = linalg.zeros(n, n)
    for j, h in enumerate(A.labels):
        m[A.element_index[pmul(pmul(g, h), gi)], j] = 1
    return m


def class_sum_rows(A):
    """Rows spanning the centre of a group algebra (class sums)."""
    rows = []
    for cls in A.group.conjugacy_classes() if hasattr(A.group, "conjugacy_classes") \
            else _subgroup_classes(A.group):
        v = A.zero()
        for g in cls:
            v[A.element_index[g]] = 1
        rows.append(v)
    return np.array(rows, dtype=np.int64)


def _subgroup_classes(H):
    seen = set()
    out = []
    for x in H.elements:
        if x in seen:
            continue
        cls = sorted({pmul(pmul(g, x), pinv(g)) for g in H.elements})
        seen.update(cls)
        out.append(cls)
    return out
