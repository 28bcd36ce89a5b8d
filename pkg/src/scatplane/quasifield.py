"""The quasifield attached to a scattered linearized polynomial.

Multiplication table convention: ``table[m, x] = x o m``. For a slope ``m``
outside the linear set, ``x o m = x m``; for ``m`` in the linear set,
``x o m = f(h x) / h`` where ``h`` is the least nonzero element with
``f(h) = m h``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import GuardError, NotScatteredError, PreconditionError
from .field import FieldTower, vadd, vmul
from .linpoly import LinearizedPoly, is_scattered

log = logging.getLogger(__name__)

TABLE_GUARD = 2**10  # q^t; the full table has (q^t)^2 entries


def fiber_representatives(f: LinearizedPoly) -> np.ndarray:
    """For every element m, the least x != 0 with f(x) = m x (0 if none)."""
    T = f.tower
    rep = np.full(T.order, T.order, dtype=np.int64)
    np.minimum.at(rep, f.slopes, T.nonzero)
    rep[rep == T.order] = 0
    return rep


class Quasifield:
    """(F_{q^t}, +, o) given by its multiplication table or by a polynomial."""

    def __init__(self, tower: FieldTower, table=None, poly: LinearizedPoly | None = None):
        if table is None and poly is None:
            raise PreconditionError("need a table or a polynomial")
        self.tower = tower
        self.poly = poly
        self._table = None if table is None else np.asarray(table, dtype=np.int64)
        if self._table is not None and self._table.shape != (tower.order, tower.order):
            raise PreconditionError("table must be q^t x q^t")
        if poly is not None:
            self.slope_mask = poly.slope_mask
            self.fiber_rep = fiber_representatives(poly)

    @classmethod
    def from_table(cls, tower: FieldTower, table) -> "Quasifield":
        return cls(tower, table=table)

    @classmethod
    def field_product(cls, tower: FieldTower) -> "Quasifield":
        """The field multiplication itself, as a control case."""
        x = tower.elements
        return cls(tower, table=vmul(x[:, None], x[None, :], tower.tables))

    def row(self, m: int) -> np.ndarray:
        """x -> x o m for every x."""
        if self._table is not None:
            return self._table[int(m)]
        T = self.tower
        m = int(m)
        x = T.elements
        if not self.slope_mask[m]:
            return vmul(x, m, T.tables)
        h = int(self.fiber_rep[m])
        return vmul(self.poly.values[vmul(h, x, T.tables)], T.inv(h), T.tables)

    def materialize(self, force: bool = False) -> np.ndarray:
        """Build the full table; past the size guard only with ``force``."""
        if self._table is None:
            if self.tower.order > TABLE_GUARD:
                if not force:
                    raise GuardError(f"full table needs q^t <= {TABLE_GUARD}")
                log.warning("table guard overridden: %d x %d entries", self.tower.order, self.tower.order)
            self._table = np.stack([self.row(m) for m in self.tower.elements])
        return self._table

    @property
    def table(self) -> np.ndarray:
        return self.materialize()

    def mul(self, x, m):
        """x o m."""
        return self.row(m)[np.asarray(x, dtype=np.int64)][()]

    def solve(self, a, b, c) -> int:
        """The unique x with x o a = x o b + c (requires a != b)."""
        if int(a) == int(b):
            raise PreconditionError("the equation x o a = x o b + c needs a != b")
        T = self.tower
        lhs = self.row(a)
        rhs = vadd(self.row(b), c, T.tables)
        roots = np.flatnonzero(lhs == rhs)
        if len(roots) != 1:
            raise PreconditionError(f"x o a = x o b + c has {len(roots)} solutions")
        return int(roots[0])


def build_quasifield(f: LinearizedPoly) -> Quasifield:
    T = f.tower
    if T.q <= 2:
        raise PreconditionError("the quasifield construction needs q > 2")
    if f.is_zero or not is_scattered(f):
        raise NotScatteredError("the quasifield construction needs a scattered polynomial")
    if f.slope_mask[0] or f.slope_mask[1]:
        raise PreconditionError("0 and 1 must lie outside the linear set; normalize first")
    return Quasifield(T, poly=f)


# ---------------------------------------------------------------------------


@dataclass
class AxiomReport:
    loop: bool
    left_distributive: bool
    solvability: bool
    kernel_order: int
    right_distributive: bool
    associative: bool
    counterexample: dict | None = field(default=None)

    @property
    def passed(self) -> bool:
        return self.loop and self.left_distributive and self.solvability

    def to_json(self) -> dict:
        return {
            "loop": self.loop,
            "left_distributive": self.left_distributive,
            "solvability": self.solvability,
            "kernel_order": self.kernel_order,
            "right_distributive": self.right_distributive,
            "associative": self.associative,
            "counterexample": self.counterexample,
        }


def _witness(tower: FieldTower, check: str, **vals) -> dict:
    return {"check": check, **{k: tower.encode(v) for k, v in vals.items()}}


def check_loop(Q: Quasifield):
    """(Q*, o) is a loop with identity 1, and 0 o m = x o 0 = 0.

    Returns None or a counterexample dict.
    """
    T = Q.tower
    tab = Q.table
    x = T.elements
    if not np.array_equal(tab[1], x):
        xb = int(np.argmax(tab[1] != x))
        return _witness(T, "right_identity", x=xb, m=1)
    if not np.array_equal(tab[:, 1], x):
        mb = int(np.argmax(tab[:, 1] != x))
        return _witness(T, "left_identity", x=1, m=mb)
    if np.any(tab[0] != 0) or np.any(tab[:, 0] != 0):
        bad = np.argwhere((tab == 0) != ((x[:, None] == 0) | (x[None, :] == 0)))[0]
        return _witness(T, "zero", x=int(bad[1]), m=int(bad[0]))
    # x -> x o m and m -> x o m must permute F_{q^t} for m, x != 0
    rows_ok = np.all(np.sort(tab[1:], axis=1) == x, axis=1)
    if not rows_ok.all():
        return _witness(T, "row_bijective", m=int(np.argmin(rows_ok)) + 1)
    cols_ok = np.all(np.sort(tab[:, 1:], axis=0) == x[:, None], axis=0)
    if not cols_ok.all():
        return _witness(T, "column_bijective", x=int(np.argmin(cols_ok)) + 1)
    return None


def check_left_distributive(Q: Quasifield, backend=None):
    T = Q.tower
    m, x, y = kernels.dispatch("left_distrib", backend)(Q.table, *kernels.field_args(T.tables))
    if m < 0:
        return None
    return _witness(T, "left_distributive", x=x, y=y, m=m)


def check_solvability(Q: Quasifield, backend=None):
    T = Q.tower
    tb = T.tables
    a, b, c = kernels.dispatch("solvability", backend)(Q.table, *kernels.field_args(tb), tb.neg)
    if a < 0:
        return None
    return _witness(T, "solvability", a=a, b=b, c=c)


def kernel(Q: Quasifield, backend=None) -> frozenset:
    """{k : k o (x + y) = k o x + k o y and k o (x o y) = (k o x) o y for all x, y}."""
    mask = kernels.dispatch("kernel_mask", backend)(Q.table, *kernels.field_args(Q.tower.tables))
    return frozenset(int(k) for k in np.flatnonzero(mask))


def structure_flags(Q: Quasifield, backend=None) -> dict:
    T = Q.tower
    x, m, k = kernels.dispatch("right_distrib", backend)(Q.table, *kernels.field_args(T.tables))
    ax, ay, az = kernels.dispatch("assoc", backend)(Q.table)
    return {
        "right_distributive": bool(x < 0),
        "associative": bool(ax < 0),
        "right_distributive_witness": None if x < 0 else _witness(T, "right_distributive", x=x, m=m, n=k),
        "associative_witness": None if ax < 0 else _witness(T, "associative", x=ax, y=ay, z=az),
    }


def verify_axioms(Q: Quasifield, backend=None) -> AxiomReport:
    """Exhaustive check of the quasifield axioms plus kernel and structure flags.

    ``counterexample`` holds the first failure among loop, left
    distributivity and solvability, in that order.
    """
    loop = check_loop(Q)
    left = check_left_distributive(Q, backend)
    solv = check_solvability(Q, backend)
    flags = structure_flags(Q, backend)
    first = next((w for w in (loop, left, solv) if w is not None), None)
    return AxiomReport(
        loop=loop is None,
        left_distributive=left is None,
        solvability=solv is None,
        kernel_order=len(kernel(Q, backend)),
        right_distributive=flags["right_distributive"],
        associative=flags["associative"],
        counterexample=first,
    )
