"""F_q-linearized polynomials over F_{q^t} and their linear sets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotScatteredError, ParseError, PreconditionError
from .field import FieldTower, vadd, vmul


class LinearizedPoly:
    """f(x) = sum_{i<t} a_i x^(q^i), stored with exactly t coefficients."""

    def __init__(self, tower: FieldTower, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != tower.t:
            raise ParseError(f"expected exactly t={tower.t} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < tower.order for c in coeffs):
            raise ParseError("coefficient index out of range")
        self.tower = tower
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------
    @classmethod
    def from_text(cls, tower: FieldTower, tokens) -> "LinearizedPoly":
        return cls(tower, [tower.decode(tok) for tok in tokens])

    @classmethod
    def from_json(cls, tower: FieldTower, obj) -> "LinearizedPoly":
        if not isinstance(obj, dict) or "coeffs" not in obj:
            raise ParseError("polynomial spec must be an object with a 'coeffs' list")
        toks = obj["coeffs"]
        if not isinstance(toks, list):
            raise ParseError("'coeffs' must be a list")
        return cls.from_text(tower, toks)

    @classmethod
    def monomial(cls, tower: FieldTower, s: int, coeff: int = 1) -> "LinearizedPoly":
        c = [0] * tower.t
        c[s % tower.t] = int(coeff)
        return cls(tower, c)

    @classmethod
    def identity(cls, tower: FieldTower) -> "LinearizedPoly":
        return cls.monomial(tower, 0)

    @classmethod
    def zero(cls, tower: FieldTower) -> "LinearizedPoly":
        return cls(tower, [0] * tower.t)

    def to_json(self) -> dict:
        return {"coeffs": [self.tower.encode(c) for c in self.coeffs]}

    # -- basic properties ---------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, LinearizedPoly)
            and other.tower is self.tower
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((id(self.tower), self.coeffs))

    def __repr__(self):
        terms = [
            f"{self.tower.encode(a)}*x^(q^{i})" for i, a in enumerate(self.coeffs) if a
        ]
        return "LinearizedPoly(" + (" + ".join(terms) or "0") + ")"

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def q_degree(self) -> int:
        if self.is_zero:
            raise PreconditionError("q-degree of the zero polynomial is undefined")
        return max(i for i, a in enumerate(self.coeffs) if a)

    @cached_property
    def values(self) -> np.ndarray:
        """f evaluated on every element, indexed by element."""
        T = self.tower
        x = T.elements
        acc = np.zeros(T.order, dtype=np.int64)
        for i, a in enumerate(self.coeffs):
            if a:
                acc = vadd(acc, vmul(a, T.sigma_table(T.e * i)[x], T.tables), T.tables)
        return acc

    def __call__(self, x):
        return self.values[np.asarray(x, dtype=np.int64)][()]

    # -- algebra -------------------------------------------------------
    def __add__(self, other: "LinearizedPoly") -> "LinearizedPoly":
        _same_tower(self, other)
        T = self.tower
        return LinearizedPoly(T, [T.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "LinearizedPoly") -> "LinearizedPoly":
        _same_tower(self, other)
        T = self.tower
        return LinearizedPoly(T, [T.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c) -> "LinearizedPoly":
        T = self.tower
        return LinearizedPoly(T, [T.mul(c, a) for a in self.coeffs])

    def compose(self, g: "LinearizedPoly") -> "LinearizedPoly":
        """(f o g)(x) = f(g(x)), reduced modulo x^(q^t) - x."""
        _same_tower(self, g)
        T = self.tower
        out = [0] * T.t
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(g.coeffs):
                if b:
                    k = (i + j) % T.t
                    out[k] = int(T.add(out[k], T.mul(a, T.q_frobenius(b, i))))
        return LinearizedPoly(T, out)

    def conjugate(self, j: int) -> "LinearizedPoly":
        """Apply the automorphism x -> x^(p^j) to every coefficient."""
        T = self.tower
        return LinearizedPoly(T, [T.sigma(a, j) for a in self.coeffs])

    def kernel_dimension(self) -> int:
        zeros = int(np.count_nonzero(self.values == 0))
        d = round(math.log(zeros, self.tower.q))
        assert self.tower.q**d == zeros
        return d

    # -- slopes ---------------------------------------------------------
    @cached_property
    def slopes(self) -> np.ndarray:
        """f(x)/x for x = 1..q^t-1 (entry k belongs to x = k+1)."""
        T = self.tower
        x = T.nonzero
        return vmul(self.values[x], T.exp[T.nm1 - T.log[x]], T.tables)

    @cached_property
    def slope_mask(self) -> np.ndarray:
        """Boolean membership table of the linear set L_f over all elements."""
        mask = np.zeros(self.tower.order, dtype=bool)
        mask[self.slopes] = True
        return mask


def _same_tower(f, g):
    if f.tower is not g.tower:
        raise PreconditionError("polynomials live over different towers")


def evaluate(f: LinearizedPoly, x):
    return f(x)


def compose(f: LinearizedPoly, g: LinearizedPoly) -> LinearizedPoly:
    return f.compose(g)


def kernel_dimension(f: LinearizedPoly) -> int:
    return f.kernel_dimension()


def max_linear_set_size(tower: FieldTower) -> int:
    return (tower.order - 1) // (tower.q - 1)


@dataclass(frozen=True)
class LinearSet:
    slopes: frozenset
    contains_infinity: bool = False

    def __len__(self):
        return len(self.slopes) + int(self.contains_infinity)

    def __contains__(self, m):
        return int(m) in self.slopes


def _require_nonzero(f: LinearizedPoly):
    if f.is_zero:
        raise PreconditionError("the zero polynomial has no linear set")


def is_scattered(f: LinearizedPoly) -> bool:
    """Slope count reaches (q^t-1)/(q-1)."""
    _require_nonzero(f)
    return len(np.unique(f.slopes)) == max_linear_set_size(f.tower)


def is_scattered_pairwise(f: LinearizedPoly) -> bool:
    """Reference check straight from the definition: z f(y) = y f(z) forces
    y, z to be F_q-dependent. Quadratic in q^t; meant for tests."""
    T = f.tower
    y = T.elements[:, None]
    z = T.elements[None, :]
    fy, fz = f.values[y], f.values[z]
    cross = vadd(vmul(z, fy, T.tables), T.neg[vmul(y, fz, T.tables)], T.tables) == 0
    ratio = vmul(z, T.exp[T.nm1 - T.log[np.maximum(y, 1)]], T.tables)
    dependent = (y == 0) | (z == 0) | np.isin(ratio, T.subfield)
    return not np.any(cross & ~dependent)


def linear_set(f: LinearizedPoly) -> LinearSet:
    _require_nonzero(f)
    return LinearSet(frozenset(int(m) for m in np.unique(f.slopes)))


def require_scattered(f: LinearizedPoly):
    if f.is_zero or not is_scattered(f):
        raise NotScatteredError(f"{f!r} is not scattered")


def solve_linear(tower: FieldTower, A, b) -> list[int]:
    """Gaussian elimination over F_{q^t}; raises on a singular system."""
    n = len(A)
    M = [list(map(int, row)) + [int(v)] for row, v in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise PreconditionError("singular linear system")
        M[col], M[piv] = M[piv], M[col]
        inv = int(tower.inv(M[col][col]))
        M[col] = [int(tower.mul(inv, v)) for v in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                c = M[r][col]
                M[r] = [int(tower.sub(v, tower.mul(c, w))) for v, w in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def interpolate_graph(tower: FieldTower, pairs) -> LinearizedPoly:
    """The unique f of q-degree < t with f(x_i) = y_i on an F_q-basis x_1..x_t."""
    pairs = [(int(x), int(y)) for x, y in pairs]
    if len(pairs) != tower.t:
        raise PreconditionError(f"need exactly t={tower.t} pairs")
    moore = [[int(tower.q_frobenius(x, j)) for j in range(tower.t)] for x, _ in pairs]
    try:
        coeffs = solve_linear(tower, moore, [y for _, y in pairs])
    except PreconditionError:
        raise PreconditionError("interpolation nodes are F_q-dependent") from None
    return LinearizedPoly(tower, coeffs)


def standard_basis(tower: FieldTower) -> list[int]:
    """The F_q-basis 1, g, ..., g^(t-1) of F_{q^t}."""
    return [tower.gpow(i) for i in range(tower.t)]
