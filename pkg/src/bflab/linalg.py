"""Dense exact linear algebra over a finite field.

Matrices are 2-D numpy int64 arrays of field codes; every routine takes
the field as its first argument.  Everything is plain Gaussian
elimination, chosen deterministic (first nonzero pivot) so that reduced
forms, representatives and solutions are reproducible bit for bit.
"""

import numpy as np


def zeros(rows, cols):
    return np.zeros((rows, cols), dtype=np.int64)


def eye(f, n):
    m = zeros(n, n)
    np.fill_diagonal(m, 1)
    return m


def mat(rows):
    a = np.array(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a


def matmul(f, a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    assert a.shape[-1] == b.shape[0], "dimension mismatch"
    ra, inner = a.shape
    cb = b.shape[1]
    if ra * inner * cb <= (1 << 22):
        prods = f.mul(a[:, :, None], b[None, :, :])
        out = f.vec_sum(prods, axis=1)
        return np.asarray(out, dtype=np.int64).reshape(ra, cb)
    out = zeros(ra, cb)
    for k in range(inner):
        col = a[:, k]
        if not col.any():
            continue
        row = b[k, :]
        if not row.any():
            continue
        out = f.add(out, f.mul(col[:, None], row[None, :]))
    return out


def matvec(f, a, v):
    return matmul(f, a, np.asarray(v, dtype=np.int64).reshape(-1, 1))[:, 0]


def vecmat(f, v, a):
    return matmul(f, np.asarray(v, dtype=np.int64).reshape(1, -1), a)[0, :]


def rref(f, m):
    """Reduced row echelon form; returns (R, pivot column list)."""
    m = np.array(m, dtype=np.int64)
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = f.mul(m[r], f.inv(int(m[r, c])))
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = f.sub(m[hit], f.mul(col[hit, None], m[r][None, :]))
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(f, m):
    if m.size == 0:
        return 0
    return rref(f, m)[0].shape[0]


def nullspace(f, m):
    """Rows spanning {x : m @ x = 0}, in RREF."""
    m = np.asarray(m, dtype=np.int64)
    rows, cols = m.shape
    if rows == 0:
        return eye(f, cols)
    r, pivots = rref(f, m)
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        return zeros(0, cols)
    basis = zeros(len(free), cols)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for j, pc in enumerate(pivots):
            basis[i, pc] = f.neg(int(r[j, fc]))
    return rref(f, basis)[0]


def solve(f, m, b):
    """One solution x of m @ x = b, or None if inconsistent."""
    m = np.asarray(m, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    assert m.shape[0] == b.shape[0], "dimension mismatch"
    aug = np.concatenate([m, b[:, None]], axis=1)
    r, pivots = rref(f, aug)
    cols = m.shape[1]
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for j, pc in enumerate(pivots):
        x[pc] = r[j, cols]
    return x


def solve_many(f, m, bs):
    """Solve m @ X = bs columnwise; None where inconsistent."""
    return [solve(f, m, bs[:, k]) for k in range(bs.shape[1])]


def inverse(f, m):
    n = m.shape[0]
    assert m.shape[1] == n
    aug = np.concatenate([m, eye(f, n)], axis=1)
    r, pivots = rref(f, aug)
    if pivots != list(range(n)):
        return None
    return r[:, n:]


class Subspace:
    """Row space of a matrix, held in RREF."""

    def __init__(self, f, ambient_dim, rows=None):
        self.field = f
        self.ambient_dim = ambient_dim
        if rows is None or np.asarray(rows).size == 0:
            self.basis = zeros(0, ambient_dim)
        else:
            rows = np.asarray(rows, dtype=np.int64)
            if rows.ndim == 1:
                rows = rows.reshape(1, -1)
            assert rows.shape[1] == ambient_dim, "ambient mismatch"
            self.basis = rref(f, rows)[0]
        self.pivots = rref(f, self.basis)[1] if self.basis.size else []

    @property
    def dim(self):
        return self.basis.shape[0]

    def contains(self, v):
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        assert v.shape[0] == self.ambient_dim, "ambient mismatch"
        return self.reduce(v) is not None

    def reduce(self, v):
        """Coordinates of v in the RREF basis, or None if v is outside."""
        if self.dim == 0:
            return zeros(1, 0)[0] if not np.any(v) else None
        return solve(self.field, self.basis.T, v)

    def contains_space(self, other):
        return all(self.contains(other.basis[i]) for i in range(other.dim))

    def sum(self, other):
        self._check(other)
        return Subspace(self.field, self.ambient_dim,
                        np.concatenate([self.basis, other.basis], axis=0))

    def intersect(self, other):
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.field, self.ambient_dim)
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        left_null = nullspace(self.field, stacked.T)
        if left_null.shape[0] == 0:
            return Subspace(self.field, self.ambient_dim)
        combo = matmul(self.field, left_null[:, :self.dim], self.basis)
        return Subspace(self.field, self.ambient_dim, combo)

    def __eq__(self, other):
        return isinstance(other, Subspace) and \
            self.ambient_dim == other.ambient_dim and \
            np.array_equal(self.basis, other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis.tobytes()))

    def _check(self, other):
        assert self.field == other.field, "field mismatch"
        assert self.ambient_dim == other.ambient_dim, "ambient mismatch"

    def __repr__(self):
        return f"Subspace(dim {self.dim} of k^{self.ambient_dim})"
