import numpy as np
import pytest

from bflab import polys
from bflab.gf import field


def test_factor_x2_minus_1_over_gf3():
    f = field(3)
    fac = polys.factor(f, (2, 0, 1))          # x^2 - 1
    assert sorted(fac) == sorted([((1, 1), 1), ((2, 1), 1)])


def test_factor_irreducible_quadratic_gf2():
    f = field(2)
    assert polys.factor(f, (1, 1, 1)) == [((1, 1, 1), 1)]
    assert polys.is_irreducible(f, (1, 1, 1))


def test_factor_x3_minus_x_over_gf5():
    f = field(5)
    fac = polys.factor(f, (0, 4, 0, 1))       # x^3 - x
    assert sorted(fac) == sorted([((0, 1), 1), ((1, 1), 1), ((4, 1), 1)])


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        polys.factor(field(2), ())


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3)])
def test_factor_remultiplies_random(p, m):
    f = field(p, m)
    rng = np.random.default_rng(101)
    done = 0
    while done < 100:
        coeffs = polys.trim(int(c) for c in
                            f.random_elements(rng, int(rng.integers(2, 10))))
        if polys.deg(coeffs) < 1:
            continue
        done += 1
        fac = polys.factor(f, coeffs, rng)
        prod = (1,)
        for irr, mult in fac:
            assert polys.is_irreducible(f, irr)
            for _ in range(mult):
                prod = polys.mul(f, prod, irr)
        assert prod == polys.monic(f, coeffs)


def test_repeated_and_frobenius_twisted_factors():
    f = field(2)
    # (x+1)^4 has zero derivative twice over GF(2)
    quartic = polys.mul(f, polys.mul(f, (1, 1), (1, 1)),
                        polys.mul(f, (1, 1), (1, 1)))
    assert polys.factor(f, quartic) == [((1, 1), 4)]
    f9 = field(3, 2)
    g = polys.mul(f9, (1, 1), (1, 1))
    assert polys.factor(f9, g) == [((1, 1), 2)]


def test_divmod_and_gcd():
    f = field(3)
    a = (1, 0, 2, 1)
    b = (2, 1)
    q, r = polys.divmod_(f, a, b)
    assert polys.add(f, polys.mul(f, q, b), r) == a
    assert polys.deg(r) < polys.deg(b)
    g = polys.gcd(f, polys.mul(f, a, b), b)
    assert g == polys.monic(f, b)
