import numpy as np
import pytest

from bflab import linalg
from bflab.algebra import group_algebra
from bflab.gf import field, make_field
from bflab.groups import group_from_generators
from bflab.radical import charpoly, radical_rows, radical_subspace

GROUPS = {
    "C2": group_from_generators(2, [(1, 0)], "C2"),
    "C3": group_from_generators(3, [(1, 2, 0)], "C3"),
    "C4": group_from_generators(4, [(1, 2, 3, 0)], "C4"),
    "S3": group_from_generators(3, [(1, 2, 0), (1, 0, 2)], "S3"),
    "A4": group_from_generators(4, [(1, 2, 0, 3), (1, 0, 3, 2)], "A4"),
    "D8": group_from_generators(4, [(1, 2, 3, 0), (1, 0, 3, 2)], "D8"),
}


def splitting(G, p):
    e = G.exponent()
    while e % p == 0:
        e //= p
    return make_field(p, e)


# dim J(kG) = |G| - sum of squares of the Brauer character degrees
RADICAL_DIMS = [
    ("C2", 2, 1), ("C3", 3, 2), ("C4", 2, 3),
    ("S3", 3, 4), ("S3", 2, 1),
    ("A4", 2, 9), ("A4", 3, 2),
    ("D8", 2, 7),
]


@pytest.mark.parametrize("name,p,expect", RADICAL_DIMS)
def test_radical_dimensions(name, p, expect):
    G = GROUPS[name]
    A = group_algebra(G, splitting(G, p))
    assert radical_rows(A).shape[0] == expect


def test_radical_of_semisimple_is_zero():
    A = group_algebra(GROUPS["C2"], field(3))
    assert radical_rows(A).shape[0] == 0
    A = group_algebra(GROUPS["S3"], make_field(5, 6))
    assert radical_rows(A).shape[0] == 0


def test_radical_is_nilpotent_two_sided_ideal():
    for name, p in (("S3", 3), ("A4", 2), ("C4", 2)):
        G = GROUPS[name]
        A = group_algebra(G, splitting(G, p))
        J = radical_subspace(A)
        for t in range(J.dim):
            for i in range(A.dim):
                b = A.basis_vector(i)
                assert J.contains(A.mul(J.basis[t], b))
                assert J.contains(A.mul(b, J.basis[t]))
        # nilpotency: J^dim vanishes
        power = J.basis
        for _ in range(A.dim):
            if power.shape[0] == 0:
                break
            nxt = []
            for u in range(power.shape[0]):
                for t in range(J.dim):
                    nxt.append(A.mul(power[u], J.basis[t]))
            power = linalg.rref(A.field, np.array(nxt, dtype=np.int64))[0] \
                if nxt else power[:0]
        assert power.shape[0] == 0


def test_charpoly_cayley_hamilton_random():
    rng = np.random.default_rng(21)
    for f in (field(2), field(2, 2), field(3)):
        for n in (1, 2, 4, 6):
            for _ in range(10):
                m = f.random_elements(rng, (n, n))
                cp = charpoly(f, m)
                assert cp[0] == 1 and len(cp) == n + 1
                acc = linalg.zeros(n, n)
                for c in cp:
                    acc = linalg.matmul(f, acc, m)
                    if c:
                        acc = f.add(acc, f.mul(int(c), linalg.eye(f, n)))
                assert not acc.any()


def test_charpoly_determinant_term():
    f = field(5)
    m = linalg.mat([[2, 0], [0, 3]])
    cp = charpoly(f, m)
    # det = 6 = 1, trace = 5 = 0: t^2 - 0t + 1... det term sign: (+1)^2 det
    assert cp == [1, 0, 1]


def test_corner_radical_is_sandwiched_radical():
    # J(eAe) = e.J(A).e, computed through two different regular
    # representations, must agree as subspaces of A
    import numpy as np
    from bflab.idempotents import block_idempotents
    from bflab.gf import make_field
    rng = np.random.default_rng(17)
    for name, p in (("S3", 2), ("A4", 2), ("S3", 3)):
        G = GROUPS[name]
        A = group_algebra(G, splitting(G, p))
        for e in block_idempotents(A, rng):
            C = A.corner(e)
            j_corner = radical_rows(C)
            inside = linalg.rref(
                A.field,
                np.array([C.to_parent(j_corner[t])
                          for t in range(j_corner.shape[0])],
                         dtype=np.int64).reshape(-1, A.dim)
                if j_corner.size else linalg.zeros(0, A.dim))[0]
            # sandwich the global radical
            J = radical_rows(A)
            le = A.lmul_matrix(e)
            re = A.rmul_matrix(e)
            sand = linalg.matmul(A.field, le,
                                 linalg.matmul(A.field, re, J.T)).T \
                if J.size else linalg.zeros(0, A.dim)
            sand = linalg.rref(A.field, sand)[0]
            assert inside.shape == sand.shape
            assert np.array_equal(inside, sand)
