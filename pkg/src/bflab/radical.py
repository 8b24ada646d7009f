"""Jacobson radical of a finite-dimensional algebra in characteristic p.

The trace form alone is blind in small characteristic, so we run the
iterated chain of characteristic-polynomial-coefficient forms on the
left regular representation: starting from I_0 = A, the next term keeps
the x in I_i with c_{p^i}(xy) = 0 for every y in I_i, where c_j(M) is
the degree-j coefficient of det(tI - M).  On I_i that form is
p^i-semilinear, so each step is one linear solve after taking p^i-th
roots; after floor(log_p dim) + 1 steps the chain has converged to J(A).

Characteristic polynomials come from Hessenberg reduction, which only
needs field divisions and is exact here.
"""

import numpy as np

from . import linalg
from .linalg import Subspace


def hessenberg(f, m):
    """Similarity-reduce m to upper Hessenberg form."""
    h = np.array(m, dtype=np.int64)
    n = h.shape[0]
    for j in range(n - 2):
        nz = np.nonzero(h[j + 1:, j])[0]
        if nz.size == 0:
            continue
        piv = j + 1 + int(nz[0])
        if piv != j + 1:
            h[[j + 1, piv]] = h[[piv, j + 1]]
            h[:, [j + 1, piv]] = h[:, [piv, j + 1]]
        inv_p = f.inv(int(h[j + 1, j]))
        col = h[j + 2:, j].copy()
        hit = np.nonzero(col)[0]
        if hit.size == 0:
            continue
        rows_idx = hit + j + 2
        factors = f.mul(col[hit], inv_p)
        # one combined similarity: clear the rows, then fix the column
        h[rows_idx] = f.sub(h[rows_idx],
                            f.mul(np.atleast_1d(factors)[:, None],
                                  h[j + 1][None, :]))
        weighted = f.mul(np.atleast_1d(factors)[None, :], h[:, rows_idx])
        h[:, j + 1] = f.add(h[:, j + 1], f.vec_sum(weighted, axis=1))
    return h


def charpoly(f, m):
    """Coefficients of det(tI - m), highest degree first: [1, c1, ..., cn]."""
    n = m.shape[0]
    if n == 0:
        return [1]
    h = hessenberg(f, m)
    # rows[k] = charpoly of leading k x k block, highest-degree-first,
    # padded to length n + 1
    rows = np.zeros((n + 1, n + 1), dtype=np.int64)
    rows[0, 0] = 1
    for k in range(1, n + 1):
        hk = int(h[k - 1, k - 1])
        prev = rows[k - 1]
        cur = prev.copy()                       # t * prev (same index slot)
        if hk:
            cur[1:] = f.sub(cur[1:], f.mul(hk, prev[:-1]))
        beta = 1
        for mdist in range(1, k):
            beta = f.mul(beta, int(h[k - mdist, k - mdist - 1]))
            if beta == 0:
                break
            coeff = f.mul(int(h[k - 1 - mdist, k - 1]), beta)
            if coeff == 0:
                continue
            shift = mdist + 1
            cur[shift:] = f.sub(cur[shift:],
                                f.mul(coeff, rows[k - 1 - mdist, :-shift]))
        rows[k] = cur
    return [int(c) for c in rows[n]]


def charpoly_coefficient(f, m, j):
    """c_j in det(tI - m) = t^n + c_1 t^(n-1) + ... + c_n."""
    return int(charpoly(f, m)[j])


def radical_rows(A):
    """Rows (A-coordinates) spanning the Jacobson radical of A (memoized)."""
    if getattr(A, "_radical_memo", None) is not None:
        return A._radical_memo
    rows = _radical_rows_impl(A)
    A._radical_memo = rows
    return rows


def _radical_rows_impl(A):
    f = A.field
    n = A.dim
    if n == 0:
        return linalg.zeros(0, 0)
    p = f.p
    levels = 0
    while p ** (levels + 1) <= n:
        levels += 1
    basis = linalg.eye(f, n)
    lmats = {}

    def lmat(row):
        key = row.tobytes()
        if key not in lmats:
            lmats[key] = A.lmul_matrix(row)
        return lmats[key]

    for i in range(levels + 1):
        r = basis.shape[0]
        if r == 0:
            break
        pi = p ** i
        if pi == 1:
            # c_1 is minus the trace: batch as flattened dot products
            stack = np.array([lmat(basis[t]).reshape(-1) for t in range(r)])
            stack_t = np.array([lmat(basis[t]).T.reshape(-1)
                                for t in range(r)])
            prods = f.mul(stack[:, None, :], stack_t[None, :, :])
            forms = np.asarray(f.vec_sum(prods, axis=2))
            forms = f.neg(forms)
        else:
            forms = linalg.zeros(r, r)
            for t in range(r):
                lt = lmat(basis[t])
                for k in range(t, r):
                    # charpoly(AB) = charpoly(BA), so the form is symmetric
                    prod = linalg.matmul(f, lt, lmat(basis[k]))
                    val = charpoly_coefficient(f, prod, pi)
                    forms[t, k] = val
                    forms[k, t] = val
        u_rows = linalg.nullspace(f, forms.T)
        if u_rows.shape[0] == r:
            continue
        # coordinates are p^i-th powers of the true ones; take roots
        x_rows = np.zeros_like(u_rows)
        for a in range(u_rows.shape[0]):
            for b in range(r):
                x_rows[a, b] = _root(f, int(u_rows[a, b]), i)
        basis = linalg.rref(f, linalg.matmul(f, x_rows, basis))[0]
    return basis


def _root(f, a, i):
    """Unique p^i-th root in GF(p^m)."""
    if i == 0 or a in (0, 1):
        return a
    k = (-i) % f.m if f.m > 1 else 0
    return f.pow(a, f.p ** k) if k else a


def radical_subspace(A):
    return Subspace(A.field, A.dim, radical_rows(A))


def radical_dim(A):
    return radical_rows(A).shape[0]
