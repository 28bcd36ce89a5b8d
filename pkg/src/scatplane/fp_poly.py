"""Dense polynomials over a prime field F_p.

Polynomials are lists of ints in ascending order of degree. Only what the
field constructor needs is here: reduction, products, powers modulo a
polynomial, gcd, and irreducibility/primitivity tests.
"""

from __future__ import annotations


def trim(a: list[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return trim([(x - y) % p for x, y in zip(a, b)])


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def divmod_poly(a, m, p):
    """Quotient and remainder of ``a`` by a nonzero ``m``."""
    a = trim([c % p for c in a])
    m = trim(m)
    if not m:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    q = [0] * max(len(a) - dm, 1)
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        c = (a[-1] * inv_lead) % p
        q[shift] = c
        for i, mc in enumerate(m):
            a[i + shift] = (a[i + shift] - c * mc) % p
        a = trim(a)
    return trim(q), a


def mod(a, m, p):
    return divmod_poly(a, m, p)[1]


def mulmod(a, b, m, p):
    return mod(mul(a, b, p), m, p)


def powmod(a, k, m, p):
    result = [1]
    base = mod(a, m, p)
    while k:
        if k & 1:
            result = mulmod(result, base, m, p)
        base = mulmod(base, base, m, p)
        k >>= 1
    return mod(result, m, p)


def gcd(a, b, p):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def is_irreducible(f, p) -> bool:
    """Rabin's test for a monic ``f`` over F_p."""
    f = trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    x = [0, 1]
    if powmod(x, p**n, f, p) != mod(x, f, p):
        return False
    for r in prime_factors(n):
        h = sub(powmod(x, p ** (n // r), f, p), x, p)
        if len(gcd(h, f, p)) != 1:
            return False
    return True


def is_primitive(f, p) -> bool:
    """True when ``x`` generates the multiplicative group of F_p[x]/(f).

    This already forces irreducibility: a non-field quotient has fewer than
    p^n - 1 units.
    """
    f = trim(f)
    n = len(f) - 1
    order = p**n - 1
    x = [0, 1]
    if powmod(x, order, f, p) != [1]:
        return False
    return all(powmod(x, order // r, f, p) != [1] for r in prime_factors(order))


def evaluate_at(poly, a, m, p):
    """Evaluate ``poly`` (over F_p) at the residue ``a`` modulo ``m``."""
    acc: list[int] = []
    for c in reversed(trim(poly)):
        acc = mulmod(acc, a, m, p)
        if c:
            acc = sub(acc, [(-c) % p], p)
    return acc
