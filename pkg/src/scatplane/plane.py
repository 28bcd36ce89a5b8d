"""Translation planes: points are vectors, lines are cosets of spread components."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import GuardError, PreconditionError
from .field import vadd
from .linpoly import LinearizedPoly, require_scattered
from .spread import Spread, verify_planar
from .subspace import SemilinearMap, equivalence_fast, stabilizer_order

DIRECT_GUARD = 2**16  # points, i.e. q^(2t)


class TranslationPlane:
    """Lines are (component index, least point of the coset)."""

    def __init__(self, spread: Spread):
        self.spread = spread
        self.tower = spread.tower

    @property
    def n_points(self) -> int:
        return self.tower.order**2

    @property
    def n_lines(self) -> int:
        return self.tower.order * len(self.spread)

    @property
    def points_per_line(self) -> int:
        return self.tower.order

    @property
    def lines_per_point(self) -> int:
        return len(self.spread)

    def line_through(self, component: int, point: int) -> tuple[int, int]:
        """The line of parallel class ``component`` containing ``point``."""
        T = self.tower
        U = self.spread.components[component]
        px, py = divmod(int(point), T.order)
        ex, ey = U.codes // T.order, U.codes % T.order
        tb = T.tables
        pts = vadd(px, ex, tb) * T.order + vadd(py, ey, tb)
        return component, int(pts.min())

    def report(self) -> dict:
        return {"points": self.n_points, "lines": self.n_lines}


def plane_from_spread(S: Spread, check: bool = True) -> TranslationPlane:
    if check:
        rep = verify_planar(S)
        if not rep.planar:
            raise PreconditionError(f"spread is not planar: {rep.witness}")
    return TranslationPlane(S)


@dataclass
class AffineReport:
    mode: str
    passed: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"mode": self.mode, "affine_axioms": "pass" if self.passed else "fail",
                "witness": self.witness}


def coset_labels(A: TranslationPlane, component: int, backend=None):
    """label[P] = index of the line of class ``component`` through P,
    or None if the component is not closed under addition."""
    T = A.tower
    U = A.spread.components[component]
    label, reps, ok = kernels.dispatch("coset_labels", backend)(
        U.codes, T.order, *kernels.field_args(T.tables)
    )
    return (label, reps) if ok else None


def _direct(A: TranslationPlane, backend=None) -> AffineReport:
    """Explicit incidence check on the point set.

    Each parallel class must split the points into q^t lines of q^t points,
    and two lines of different classes must share exactly one point. Then
    no two points lie on two lines, and counting pairs, (q^t+1) q^t
    C(q^t, 2) = C(q^(2t), 2), every pair lies on exactly one line; the line
    of the same class through a point off a line is its unique parallel.
    """
    T = A.tower
    n = T.order
    ncls = len(A.spread)
    if ncls != n + 1:
        return AffineReport("direct", False, {"parallel_classes": ncls})
    labels = np.empty((ncls, n * n), dtype=np.int64)
    reps = []
    for c in range(ncls):
        res = coset_labels(A, c, backend)
        if res is None or len(res[1]) != n or len(A.spread.components[c]) != n:
            return AffineReport("direct", False, {"component": c, "reason": "not a parallel class"})
        labels[c], r = res
        reps.append(r)
    c1, c2, l1, l2, cnt = kernels.dispatch("incidence", backend)(labels, n)
    if c1 < 0:
        return AffineReport("direct", True)
    shared = np.flatnonzero((labels[c1] == l1) & (labels[c2] == l2))[:2]
    enc = T.encode
    return AffineReport("direct", False, {
        "lines": [[int(c1), int(reps[c1][l1])], [int(c2), int(reps[c2][l2])]],
        "common_points": int(cnt),
        "points": [[enc(P // n), enc(P % n)] for P in shared.tolist()],
    })


def verify_affine(A: TranslationPlane, mode: str = "structural", backend=None) -> AffineReport:
    if mode == "structural":
        rep = verify_planar(A.spread)
        return AffineReport("structural", rep.planar, rep.witness)
    if mode == "direct":
        if A.n_points > DIRECT_GUARD:
            raise GuardError(f"direct verification needs q^(2t) <= {DIRECT_GUARD}")
        return _direct(A, backend)
    raise PreconditionError(f"mode must be 'structural' or 'direct', got {mode!r}")


def planes_isomorphic(f: LinearizedPoly, g: LinearizedPoly, **kw) -> SemilinearMap | None:
    """A semilinear map carrying U_f to U_g, which then induces a plane
    isomorphism A_f -> A_g; None if the planes are not isomorphic."""
    if f.tower.q <= 3:
        raise PreconditionError("the isomorphism criterion needs q > 3")
    require_scattered(f)
    require_scattered(g)
    return equivalence_fast(f, g, **kw)


def collineation_order(f: LinearizedPoly, group: str = "GL", **kw) -> int:
    return stabilizer_order(f, group, **kw)
