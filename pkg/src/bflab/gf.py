"""Exact arithmetic in GF(p^m).

Field elements are integer codes in [0, q): the code sum(c_i * p^i)
stands for the residue class sum(c_i * x^i) modulo a fixed monic
irreducible polynomial of degree m over GF(p).  All element operations
accept plain ints or numpy integer arrays and are vectorized.

Multiplication runs through discrete log/exp tables of a primitive
element; addition is digitwise mod p (XOR when p = 2), so no q-by-q
tables are ever built and fields up to 2^63 elements are representable.
"""

from functools import lru_cache

import numpy as np


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomial helpers over the prime field GF(p), coefficient tuples --
# (used only while constructing a field; everyday polynomial work over a
# built field lives in bflab.polys)

def _pf_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _pf_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pf_mod(tuple(out), mod, p)


def _pf_mod(a, mod, p):
    a = list(_pf_trim(a))
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while a and len(a) - 1 >= dm:
        shift = len(a) - 1 - dm
        factor = (a[-1] * inv_lead) % p
        for i, mi in enumerate(mod):
            a[shift + i] = (a[shift + i] - factor * mi) % p
        a = list(_pf_trim(a))
    return tuple(a)


def _pf_sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
           for i in range(n)]
    return _pf_trim(out)


def _pf_powmod(a, n, mod, p):
    result = (1,)
    base = _pf_mod(a, mod, p)
    while n:
        if n & 1:
            result = _pf_mulmod(result, base, mod, p)
        base = _pf_mulmod(base, base, mod, p)
        n >>= 1
    return result


def _pf_gcd(a, b, p):
    a, b = _pf_trim(a), _pf_trim(b)
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        monic_b = tuple((c * inv_lead) % p for c in b)
        r = _pf_mod(a, monic_b, p)
        a, b = monic_b, r
    return a


def _pf_is_irreducible(f, p):
    """Rabin test: x^(p^m) = x mod f, and x^(p^(m/t)) - x coprime to f."""
    m = len(f) - 1
    if m < 1:
        return False
    x = (0, 1)
    xq = _pf_powmod(x, p ** m, f, p)
    if _pf_sub(xq, x, p):
        return False
    for t in _prime_factors(m):
        xe = _pf_powmod(x, p ** (m // t), f, p)
        g = _pf_gcd(f, _pf_sub(xe, x, p), p)
        if len(g) > 1:
            return False
    return True


def _lowest_irreducible(p, m):
    """Monic irreducible of degree m over GF(p), least in code order.

    Code order enumerates the non-leading coefficients as the base-p
    digits of an integer, constant term least significant.
    """
    if m == 1:
        return (0, 1)
    for code in range(p ** m):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(c % p)
            c //= p
        f = tuple(coeffs) + (1,)
        if _pf_is_irreducible(f, p):
            return f
    raise RuntimeError("no irreducible polynomial found (unreachable)")


class FiniteField:
    """GF(p^m) with vectorized exact arithmetic on integer codes."""

    def __init__(self, p, m, modulus=None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        q = p ** m
        if q >= 2 ** 63:
            raise ValueError(f"field order p^m = {q} does not fit in 64 bits")
        if q > 2 ** 20:
            raise ValueError(f"field order {q} exceeds the table budget "
                             "(desk-scale fields only)")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = tuple(modulus) if modulus else _lowest_irreducible(p, m)
        assert len(self.modulus) == m + 1 and self.modulus[-1] == 1
        self._powers = np.array([p ** i for i in range(m)], dtype=np.int64)
        self._build_log_tables()

    # -- construction of log/exp tables ---------------------------------

    def _poly_mul_code(self, a, b):
        """Product of two codes by schoolbook polynomial arithmetic."""
        ca = [(a // int(pw)) % self.p for pw in self._powers]
        cb = [(b // int(pw)) % self.p for pw in self._powers]
        prod = [0] * (2 * self.m - 1) if self.m > 1 else [ca[0] * cb[0] % self.p]
        if self.m > 1:
            for i, x in enumerate(ca):
                if x:
                    for j, y in enumerate(cb):
                        prod[i + j] = (prod[i + j] + x * y) % self.p
        red = _pf_mod(tuple(prod), self.modulus, self.p)
        return sum(c * self.p ** i for i, c in enumerate(red))

    def _code_order(self, a):
        n = 1
        b = a
        while b != 1:
            b = self._poly_mul_code(b, a)
            n += 1
            if n > self.q:
                raise RuntimeError("order search runaway")
        return n

    def _build_log_tables(self):
        q = self.q
        gen = None
        for cand in range(2, q):
            if self._code_order(cand) == q - 1:
                gen = cand
                break
        if gen is None:
            gen = 1  # q = 2: unit group is trivial
        exp = np.zeros(max(2 * (q - 1), 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        acc = 1
        for i in range(q - 1):
            exp[i] = acc
            exp[i + q - 1] = acc
            log[acc] = i
            acc = self._poly_mul_code(acc, gen)
        self.generator = gen
        self._exp = exp
        self._log = log
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()
        if self.p != 2:
            self._neg_list = [self._scalar_neg(a) for a in range(q)]
            self._add_rows = [[self._scalar_add(a, b) for b in range(q)]
                              for a in range(q)] if q <= 256 else None

    def _scalar_add(self, a, b):
        out = 0
        pw = 1
        for _ in range(self.m):
            out += ((a + b) % self.p) * pw
            a //= self.p
            b //= self.p
            pw *= self.p
        return out

    def _scalar_neg(self, a):
        out = 0
        pw = 1
        for _ in range(self.m):
            out += (-(a % self.p)) % self.p * pw
            a //= self.p
            pw *= self.p
        return out

    # -- scalar/array operations ----------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b) if isinstance(a, np.ndarray) or \
                isinstance(b, np.ndarray) else (a ^ b)
        if isinstance(a, int) and isinstance(b, int):
            if self._add_rows is not None:
                return self._add_rows[a][b]
            return self._scalar_add(a, b)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pw in self._powers:
            out += ((a // pw + b // pw) % self.p) * pw
        return out if out.shape else int(out)

    def neg(self, a):
        if self.p == 2:
            return a
        if isinstance(a, int):
            return self._neg_list[a]
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros(a.shape, dtype=np.int64)
        for pw in self._powers:
            out += ((-(a // pw)) % self.p) * pw
        return out if out.shape else int(out)

    def sub(self, a, b):
        if self.p == 2:
            return self.add(a, b)
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if isinstance(a, int) and isinstance(b, int):
            if a == 0 or b == 0:
                return 0
            return self._exp_list[self._log_list[a] + self._log_list[b]]
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.where((a == 0) | (b == 0), 0,
                       self._exp[self._log[a] + self._log[b]])
        return out if out.shape else int(out)

    def inv(self, a):
        if isinstance(a, int):
            if a == 0:
                raise ZeroDivisionError("inverting 0 in finite field")
            return self._exp_list[(self.q - 1 - self._log_list[a])
                                  % (self.q - 1)]
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverting 0 in finite field")
        out = self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return out if out.shape else int(out)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if a == 0:
            return 0 if n else 1
        return int(self._exp[(int(self._log[a]) * (n % (self.q - 1)))
                             % (self.q - 1)])

    def vec_sum(self, arr, axis=None):
        """Field sum of an array along an axis (or all entries)."""
        arr = np.asarray(arr, dtype=np.int64)
        if self.p == 2:
            out = np.bitwise_xor.reduce(arr, axis=axis)
            return out if isinstance(out, np.ndarray) and out.shape else int(out)
        out = 0
        for pw in self._powers:
            digits = (arr // pw) % self.p
            out = out + (digits.sum(axis=axis) % self.p) * pw
        return out if isinstance(out, np.ndarray) and out.shape else int(out)

    def frobenius(self, a, k=1):
        """a ** (p**k), the k-fold Frobenius."""
        return self.pow(int(a), self.p ** k)

    def frobenius_inv(self, a, k=1):
        """Unique p^k-th root, i.e. Frobenius applied m - k (mod m) times."""
        return self.pow(int(a), self.p ** ((self.m - k) % self.m)) \
            if self.m > 1 else int(a)

    def elements(self):
        return range(self.q)

    def random_elements(self, rng, size):
        return rng.integers(0, self.q, size=size, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and \
            (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"


@lru_cache(maxsize=None)
def _field_cache(p, m):
    return FiniteField(p, m)


def field(p, m=1):
    """GF(p^m) with the canonical (lowest-code) modulus, cached."""
    return _field_cache(p, m)


def make_field(p, e):
    """Smallest GF(p^m) whose unit group has an element of order e.

    `e` should be the p'-part of the exponent of the group under study;
    the returned field then splits its group algebra.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("e must be a positive integer")
    if e % p == 0:
        raise ValueError(f"e = {e} must be prime to p = {p}")
    m = 1
    while (p ** m - 1) % e != 0:
        m += 1
        if p ** m >= 2 ** 63:
            raise ValueError(f"no GF(p^m) below 2^63 has {e} | p^m - 1")
    return field(p, m)


def extend_field(f, factor=2):
    """GF(p^(factor*m)) together with the embedding table of f into it.

    Returns (big, table) where table[code_in_f] is the image code.
    """
    big = field(f.p, f.m * factor)
    # root of f's modulus inside big, by direct scan
    root = None
    for cand in range(big.q):
        acc = 0
        for c in reversed(f.modulus):
            acc = big.add(big.mul(acc, cand), c)
        if acc == 0:
            root = cand
            break
    assert root is not None, "modulus must split in the extension"
    table = np.zeros(f.q, dtype=np.int64)
    for code in range(f.q):
        acc = 0
        c = code
        img = 0
        rpow = 1
        for _ in range(f.m):
            digit = c % f.p
            c //= f.p
            if digit:
                img = big.add(img, big.mul(digit % big.q, rpow))
            rpow = big.mul(rpow, root)
        table[code] = img
    return big, table
