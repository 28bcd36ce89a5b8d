"""Conway polynomials: a shipped table plus the defining search.

The table covers the fields exercised by the test-suite and the CLI examples;
other (p, n) pairs are computed on demand by :func:`conway_polynomial`.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from . import fp_poly as fpp

# (p, n) -> ascending coefficients, monic of degree n
CONWAY: dict[tuple[int, int], list[int]] = {
    (2, 2): [1, 1, 1],
    (2, 3): [1, 1, 0, 1],
    (2, 4): [1, 1, 0, 0, 1],
    (2, 5): [1, 0, 1, 0, 0, 1],
    (2, 6): [1, 1, 0, 1, 1, 0, 1],
    (2, 7): [1, 1, 0, 0, 0, 0, 0, 1],
    (2, 8): [1, 0, 1, 1, 1, 0, 0, 0, 1],
    (2, 9): [1, 0, 0, 0, 1, 0, 0, 0, 0, 1],
    (2, 10): [1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1],
    (2, 11): [1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (2, 12): [1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1],
    (2, 13): [1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (2, 14): [1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1],
    (2, 15): [1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (2, 16): [1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (2, 17): [1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (2, 18): [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1],
    (2, 19): [1, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (2, 20): [1, 1, 0, 0, 1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (2, 21): [1, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (2, 22): [1, 0, 0, 0, 0, 1, 1, 0, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (3, 2): [2, 2, 1],
    (3, 3): [1, 2, 0, 1],
    (3, 4): [2, 0, 0, 2, 1],
    (3, 5): [1, 2, 0, 0, 0, 1],
    (3, 6): [2, 2, 1, 0, 2, 0, 1],
    (3, 7): [1, 0, 2, 0, 0, 0, 0, 1],
    (3, 8): [2, 2, 2, 0, 1, 2, 0, 0, 1],
    (3, 9): [1, 1, 2, 2, 0, 0, 0, 0, 0, 1],
    (3, 10): [2, 1, 0, 0, 2, 2, 2, 0, 0, 0, 1],
    (3, 11): [1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (3, 12): [2, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1],
    (3, 13): [1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (5, 2): [2, 4, 1],
    (5, 3): [3, 3, 0, 1],
    (5, 4): [2, 4, 4, 0, 1],
    (5, 5): [3, 4, 0, 0, 0, 1],
    (5, 6): [2, 0, 1, 4, 1, 0, 1],
    (5, 7): [3, 3, 0, 0, 0, 0, 0, 1],
    (5, 8): [2, 4, 3, 0, 1, 0, 0, 0, 1],
    (5, 9): [3, 1, 0, 2, 0, 0, 0, 0, 0, 1],
    (7, 2): [3, 6, 1],
    (7, 3): [4, 0, 6, 1],
    (7, 4): [3, 4, 5, 0, 1],
    (7, 5): [4, 1, 0, 0, 0, 1],
    (7, 6): [3, 6, 4, 5, 1, 0, 1],
    (7, 7): [4, 6, 0, 0, 0, 0, 0, 1],
    (11, 2): [2, 7, 1],
    (11, 3): [9, 2, 0, 1],
    (11, 4): [2, 10, 8, 0, 1],
    (11, 5): [9, 0, 10, 0, 0, 1],
    (13, 2): [2, 12, 1],
    (13, 3): [11, 2, 0, 1],
    (13, 4): [2, 12, 3, 0, 1],
    (13, 5): [11, 4, 0, 0, 0, 1],
}


def _candidates(p: int, n: int):
    # Conway order: f = x^n + sum (-1)^(n-i) c_i x^i, (c_{n-1}, ..., c_0) lexicographic.
    for cs in itertools.product(range(p), repeat=n):
        if cs[-1] == 0:
            continue
        coeffs = [0] * (n + 1)
        coeffs[n] = 1
        for k, c in enumerate(cs):
            i = n - 1 - k
            coeffs[i] = (c if (n - i) % 2 == 0 else -c) % p
        yield coeffs


def _compatible(f: list[int], p: int, n: int) -> bool:
    for r in fpp.prime_factors(n):
        d = n // r
        sub = conway_polynomial(p, d)
        root = fpp.powmod([0, 1], (p**n - 1) // (p**d - 1), f, p)
        if fpp.evaluate_at(sub, root, f, p):
            return False
    return True


@lru_cache(maxsize=None)
def _search(p: int, n: int) -> tuple[int, ...]:
    for f in _candidates(p, n):
        if fpp.is_primitive(f, p) and _compatible(f, p, n):
            return tuple(f)
    raise RuntimeError(f"no Conway polynomial found for p={p}, n={n}")


def conway_polynomial(p: int, n: int) -> list[int]:
    """Conway polynomial of degree ``n`` over F_p (ascending coefficients)."""
    if not fpp.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("degree must be positive")
    if (p, n) in CONWAY:
        return list(CONWAY[(p, n)])
    return list(_search(p, n))
