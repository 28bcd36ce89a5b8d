"""Table-driven arithmetic in the tower F_p < F_q < F_{q^t}.

Elements are plain integers: the index ``sum d_i p^i`` of the residue
``sum d_i x^i`` modulo the defining polynomial. Every operation accepts either
an int or an integer ndarray and broadcasts like numpy.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import fp_poly as fpp
from .conway import conway_polynomial
from .errors import FieldError, GuardError, ParseError

MAX_FIELD_ORDER = 2**22

_POW_RE = re.compile(r"g\^(\d+)")
_INT_RE = re.compile(r"\d+")


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    t: int
    modulus: tuple[int, ...] | None = None

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def order(self) -> int:
        return self.p ** (self.e * self.t)

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        if not isinstance(obj, dict):
            raise ParseError("field spec must be a JSON object")
        unknown = set(obj) - {"p", "e", "t", "modulus"}
        if unknown:
            raise ParseError(f"field spec: unknown key(s) {sorted(unknown)}")
        try:
            p, e, t = (obj[k] for k in ("p", "e", "t"))
        except KeyError as exc:
            raise ParseError(f"field spec: missing key {exc.args[0]!r}") from None
        for name, v in (("p", p), ("e", e), ("t", t)):
            if not isinstance(v, int) or isinstance(v, bool):
                raise ParseError(f"field spec: {name!r} must be an integer")
        modulus = obj.get("modulus")
        if modulus is not None:
            if not isinstance(modulus, list) or not all(
                isinstance(c, int) and not isinstance(c, bool) for c in modulus
            ):
                raise ParseError("field spec: 'modulus' must be a list of integers")
            modulus = tuple(modulus)
        return cls(p, e, t, modulus)

    def to_json(self) -> dict:
        out = {"p": self.p, "e": self.e, "t": self.t}
        if self.modulus is not None:
            out["modulus"] = list(self.modulus)
        return out


class Tables(NamedTuple):
    """The raw arrays the compiled kernels work on."""

    p: int
    nm1: int
    exp: np.ndarray  # length 2*(n-1), exp[k] = g^k
    log: np.ndarray  # log[0] = -1
    zech: np.ndarray  # zech[k] = log(1 + g^k), -1 when 1 + g^k = 0
    neg: np.ndarray


def _i64(x):
    return np.asarray(x, dtype=np.int64)


def vmul(x, y, T: Tables):
    x, y = _i64(x), _i64(y)
    lx, ly = T.log[x], T.log[y]
    zero = (lx < 0) | (ly < 0)
    out = T.exp[np.where(zero, 0, lx + ly)]
    return np.where(zero, 0, out)


def vadd(x, y, T: Tables):
    x, y = _i64(x), _i64(y)
    if T.p == 2:
        return x ^ y
    lx, ly = T.log[x], T.log[y]
    k = (ly - lx) % T.nm1
    z = T.zech[k]
    out = T.exp[np.maximum(lx, 0) + np.maximum(z, 0)]
    out = np.where(z < 0, 0, out)
    return np.where(lx < 0, y, np.where(ly < 0, x, out))


def vsub(x, y, T: Tables):
    return vadd(x, T.neg[_i64(y)], T)


class FieldTower:
    """F_{q^t} together with its subfield F_q, built from exp/log tables."""

    def __init__(self, spec: FieldSpec, force: bool = False):
        p, e, t = spec.p, spec.e, spec.t
        if not fpp.is_prime(p):
            raise FieldError(f"p={p} is not prime")
        if e < 1:
            raise FieldError("e must be a positive integer")
        if t < 2:
            raise FieldError("t must be at least 2")
        deg = e * t
        n = p**deg
        if n > MAX_FIELD_ORDER and not force:
            raise GuardError(f"field order {n} exceeds the table guard {MAX_FIELD_ORDER}")
        if spec.modulus is None:
            modulus = conway_polynomial(p, deg)
        else:
            modulus = [c % p for c in spec.modulus]
            if len(fpp.trim(modulus)) - 1 != deg:
                raise FieldError(f"modulus must have degree {deg}, got {len(fpp.trim(modulus)) - 1}")
            if modulus[deg] != 1:
                raise FieldError("modulus must be monic")
            if not fpp.is_irreducible(modulus, p):
                raise FieldError("modulus is reducible over F_p")
        self.spec = spec
        self.p, self.e, self.t = p, e, t
        self.q = p**e
        self.degree = deg
        self.order = n
        self.nm1 = n - 1
        self.modulus = tuple(modulus)
        self._pw = p ** np.arange(deg, dtype=np.int64)
        self.generator = self._least_generator()
        self._build_tables()
        self._frob_cache: dict[int, np.ndarray] = {}
        fixed = self.elements[self.q_frobenius(self.elements, 1) == self.elements]
        self.subfield = fixed
        if len(fixed) != self.q:  # pragma: no cover - would mean broken tables
            raise FieldError("subfield F_q has the wrong size")

    # -- construction ----------------------------------------------------
    def _poly(self, idx: int) -> list[int]:
        return fpp.trim([(idx // self.p**i) % self.p for i in range(self.degree)])

    def _index(self, poly) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(poly))

    def _least_generator(self) -> int:
        factors = fpp.prime_factors(self.nm1)
        m = list(self.modulus)
        for c in range(2, self.order):
            a = self._poly(c)
            if fpp.powmod(a, self.nm1, m, self.p) != [1]:
                continue
            if all(fpp.powmod(a, self.nm1 // r, m, self.p) != [1] for r in factors):
                return c
        raise FieldError("no multiplicative generator found")  # pragma: no cover

    def _mulmatrix(self, h: list[int]) -> np.ndarray:
        rows = []
        for j in range(self.degree):
            prod = fpp.mulmod([0] * j + [1], h, list(self.modulus), self.p)
            rows.append(prod + [0] * (self.degree - len(prod)))
        return np.array(rows, dtype=np.int64)

    def digits(self, x) -> np.ndarray:
        x = _i64(x)
        return (x[..., None] // self._pw) % self.p

    def from_digits(self, d) -> np.ndarray:
        return (_i64(d) % self.p) @ self._pw

    def _build_tables(self):
        n, nm1, p = self.order, self.nm1, self.p
        g = self._poly(self.generator)
        exp = np.zeros(nm1, dtype=np.int64)
        exp[0] = 1
        k = 1
        # doubling: exp[k:2k] = exp[:k] * g^k, one matrix product per round
        while k < nm1:
            step = min(k, nm1 - k)
            gk = fpp.powmod(g, k, list(self.modulus), p)
            block = (self.digits(exp[:step]) @ self._mulmatrix(gk)) % p
            exp[k : k + step] = self.from_digits(block)
            k += step
        log = np.full(n, -1, dtype=np.int64)
        log[exp] = np.arange(nm1, dtype=np.int64)
        if np.count_nonzero(log >= 0) != nm1:  # pragma: no cover
            raise FieldError("generator does not cover the multiplicative group")
        d0 = exp % p
        one_plus = exp - d0 + (d0 + 1) % p
        zech = log[one_plus]
        dg = self.digits(np.arange(n, dtype=np.int64))
        neg = self.from_digits((-dg) % p)
        self.exp = np.concatenate([exp, exp])
        self.log = log
        self.zech = zech
        self.neg = neg
        self.tables = Tables(p, nm1, self.exp, log, zech, neg)
        self.elements = np.arange(n, dtype=np.int64)
        self.nonzero = self.elements[1:]

    # -- arithmetic --------------------------------------------------------
    def add(self, x, y):
        return vadd(x, y, self.tables)[()]

    def sub(self, x, y):
        return vsub(x, y, self.tables)[()]

    def negate(self, x):
        return self.neg[_i64(x)][()]

    def mul(self, x, y):
        return vmul(x, y, self.tables)[()]

    def inv(self, x):
        x = _i64(x)
        if np.any(x == 0):
            raise ZeroDivisionError("inverse of zero in F_{q^t}")
        return self.exp[self.nm1 - self.log[x]][()]

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, k: int):
        x = _i64(x)
        lx = self.log[x]
        kk = int(k) % self.nm1
        out = self.exp[np.maximum(lx, 0) * kk % self.nm1]
        zero_val = 1 if k == 0 else 0
        return np.where(lx < 0, zero_val, out)[()]

    def gpow(self, k: int):
        """The element g^k."""
        return int(self.exp[int(k) % self.nm1])

    def sigma(self, x, j: int):
        """The field automorphism x -> x^(p^j)."""
        return self.pow(x, pow(self.p, j % self.degree, self.nm1) if self.nm1 > 1 else 1)

    def sigma_table(self, j: int) -> np.ndarray:
        j %= self.degree
        tab = self._frob_cache.get(j)
        if tab is None:
            tab = _i64(self.sigma(self.elements, j))
            self._frob_cache[j] = tab
        return tab

    def q_frobenius(self, x, i: int):
        """x -> x^(q^i); the exponent is taken modulo t."""
        return self.sigma_table(self.e * (i % self.t))[_i64(x)][()]

    def rel_norm(self, x):
        """Relative norm N_{q^t/q}(x) = x^((q^t-1)/(q-1))."""
        return self.pow(x, self.nm1 // (self.q - 1))

    def in_subfield(self, x):
        return (self.q_frobenius(x, 1) == _i64(x))[()]

    @property
    def automorphisms(self) -> range:
        return range(self.degree)

    def coset_reps(self) -> np.ndarray:
        """Least element index in each coset h*F_q^* of F_{q^t}^*, sorted."""
        sub_nz = self.subfield[self.subfield != 0]
        prods = vmul(self.nonzero[:, None], sub_nz[None, :], self.tables)
        return np.unique(prods.min(axis=1))

    def multiplicative_order(self, x) -> int:
        lx = int(self.log[int(x)])
        if lx < 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        return self.nm1 // math.gcd(lx, self.nm1)

    # -- text codec ----------------------------------------------------
    def encode(self, x) -> str:
        x = int(x)
        if not 0 <= x < self.order:
            raise ParseError(f"element index {x} out of range")
        if x == 0:
            return "0"
        if x == 1:
            return "1"
        return f"g^{int(self.log[x])}"

    def decode(self, text) -> int:
        if isinstance(text, (int, np.integer)) and not isinstance(text, bool):
            text = str(int(text))
        if not isinstance(text, str):
            raise ParseError(f"element must be a string, got {type(text).__name__}")
        s = text.strip()
        m = _POW_RE.fullmatch(s)
        if m:
            return self.gpow(int(m.group(1)))
        if _INT_RE.fullmatch(s):
            v = int(s)
            if v >= self.order:
                raise ParseError(f"element index {v} out of range [0, {self.order})")
            return v
        raise ParseError(f"malformed element token {text!r}")

    def __repr__(self):
        return f"FieldTower(p={self.p}, e={self.e}, t={self.t}, order={self.order})"


@lru_cache(maxsize=32)
def _build_cached(spec: FieldSpec) -> FieldTower:
    return FieldTower(spec)


def build_field(spec: FieldSpec | None = None, *, p=None, e=None, t=None, force=False) -> FieldTower:
    """Build (and cache) the tower for ``spec`` or for keyword parameters."""
    if spec is None:
        spec = FieldSpec(p, e, t)
    if force:
        return FieldTower(spec, force=True)
    return _build_cached(spec)


def tower_for(q: int, t: int) -> FieldTower:
    """Default-modulus tower for a prime power ``q``."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    e = round(math.log(q, p))
    if p**e != q or not fpp.is_prime(p):
        raise FieldError(f"{q} is not a prime power")
    return build_field(FieldSpec(p, e, t))
