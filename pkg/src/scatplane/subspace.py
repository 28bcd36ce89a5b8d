"""F_q-subspaces of F_{q^t}^2 and the action of GammaL(2, q^t) on them.

Vectors (x, y) are stored as integer codes ``x * q^t + y``. A
:class:`SemilinearMap` acts as ``v -> M v^sigma``: the field automorphism is
applied first, then the matrix.
"""

from __future__ import annotations

import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import GuardError, NotScatteredError, ParseError, PreconditionError
from .field import FieldTower, vadd, vmul, vsub
from .linpoly import (
    LinearizedPoly,
    LinearSet,
    interpolate_graph,
    is_scattered,
    require_scattered,
    standard_basis,
)

log = logging.getLogger(__name__)

SEARCH_GUARD = 2**22  # q^(2t) candidate pairs per automorphism
ORACLE_GUARD = 32  # q^t for full GammaL(2, q^t) enumeration


def vec_code(tower: FieldTower, x, y):
    return np.asarray(x, dtype=np.int64) * tower.order + np.asarray(y, dtype=np.int64)


def vec_split(tower: FieldTower, codes):
    codes = np.asarray(codes, dtype=np.int64)
    return codes // tower.order, codes % tower.order


def vec_add(tower: FieldTower, u, v):
    ux, uy = vec_split(tower, u)
    vx, vy = vec_split(tower, v)
    T = tower.tables
    return vec_code(tower, vadd(ux, vx, T), vadd(uy, vy, T))


def vec_scale(tower: FieldTower, alpha, v):
    vx, vy = vec_split(tower, v)
    T = tower.tables
    return vec_code(tower, vmul(alpha, vx, T), vmul(alpha, vy, T))


class Subspace2:
    """An F_q-subspace of F_{q^t}^2 with its full element set.

    Elements are materialised lazily from the basis the first time they are
    needed, so large spreads only pay for the components they touch.
    """

    def __init__(self, tower: FieldTower, basis, codes=None):
        self.tower = tower
        self.basis = [(int(x), int(y)) for x, y in basis]
        if codes is not None:
            self.__dict__["codes"] = np.unique(np.asarray(codes, dtype=np.int64))

    @classmethod
    def span(cls, tower: FieldTower, vectors) -> "Subspace2":
        """F_q-span of the given vectors; the basis keeps only independent ones."""
        codes = np.zeros(1, dtype=np.int64)
        basis = []
        for x, y in vectors:
            v = int(vec_code(tower, x, y))
            if np.isin(v, codes):
                continue
            parts = [vec_add(tower, codes, vec_scale(tower, a, v)) for a in tower.subfield]
            codes = np.unique(np.concatenate(parts))
            basis.append((x, y))
        return cls(tower, basis, codes)

    @cached_property
    def codes(self) -> np.ndarray:
        return Subspace2.span(self.tower, self.basis).codes

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.codes)

    def __contains__(self, v) -> bool:
        x, y = v
        c = int(vec_code(self.tower, x, y))
        i = np.searchsorted(self.codes, c)
        return bool(i < len(self.codes) and self.codes[i] == c)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace2)
            and other.tower is self.tower
            and np.array_equal(other.codes, self.codes)
        )

    def __hash__(self):
        return hash(self.fingerprint)

    @cached_property
    def fingerprint(self) -> str:
        return hashlib.blake2b(self.codes.tobytes(), digest_size=16).hexdigest()

    def is_fq_closed(self) -> bool:
        T = self.tower
        c = self.codes
        if len(c) != T.q ** round(np.log(len(c)) / np.log(T.q)):
            return False
        for v in self.basis:
            if not np.all(np.isin(vec_add(T, c, int(vec_code(T, *v))), c)):
                return False
        return all(np.all(np.isin(vec_scale(T, a, c), c)) for a in T.subfield)

    def points(self) -> np.ndarray:
        """Projective point of every nonzero element: slope y/x, or q^t for x = 0."""
        T = self.tower
        x, y = vec_split(T, self.codes[self.codes != 0])
        slope = vmul(y, T.exp[T.nm1 - T.log[np.maximum(x, 1)]], T.tables)
        return np.where(x == 0, T.order, slope)

    def linear_set(self) -> LinearSet:
        pts = np.unique(self.points())
        inf = bool(len(pts) and pts[-1] == self.tower.order)
        return LinearSet(frozenset(int(m) for m in pts if m != self.tower.order), inf)

    def __repr__(self):
        return f"Subspace2(dim={self.dimension}, size={len(self.codes)})"


def from_poly(f: LinearizedPoly) -> Subspace2:
    """U_f = {(x, f(x))}."""
    T = f.tower
    basis = [(x, int(f(x))) for x in standard_basis(T)]
    return Subspace2(T, basis, vec_code(T, T.elements, f.values))


def desarguesian_line(tower: FieldTower, m=None) -> Subspace2:
    """<(1, m)> over F_{q^t}, or <(0, 1)> when m is None."""
    T = tower
    x = T.elements
    if m is None:
        basis = [(0, b) for b in standard_basis(T)]
        return Subspace2(T, basis, vec_code(T, 0, x))
    basis = [(b, int(T.mul(b, m))) for b in standard_basis(T)]
    return Subspace2(T, basis, vec_code(T, x, vmul(x, m, T.tables)))


def is_scattered_subspace(U: Subspace2) -> bool:
    counts = np.bincount(U.points(), minlength=U.tower.order + 1)
    return bool(counts.max(initial=0) <= U.tower.q - 1)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemilinearMap:
    """(x, y) -> (a x^s + b y^s, c x^s + d y^s) with s: z -> z^(p^sigma)."""

    a: int
    b: int
    c: int
    d: int
    sigma: int = 0

    @classmethod
    def identity(cls) -> "SemilinearMap":
        return cls(1, 0, 0, 1, 0)

    @classmethod
    def scalar(cls, h) -> "SemilinearMap":
        return cls(int(h), 0, 0, int(h), 0)

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def det(self, tower: FieldTower) -> int:
        return int(tower.sub(tower.mul(self.a, self.d), tower.mul(self.b, self.c)))

    def apply(self, tower: FieldTower, x, y):
        T = tower.tables
        sx = tower.sigma_table(self.sigma)[np.asarray(x, dtype=np.int64)]
        sy = tower.sigma_table(self.sigma)[np.asarray(y, dtype=np.int64)]
        return (
            vadd(vmul(self.a, sx, T), vmul(self.b, sy, T), T),
            vadd(vmul(self.c, sx, T), vmul(self.d, sy, T), T),
        )

    def compose(self, tower: FieldTower, first: "SemilinearMap") -> "SemilinearMap":
        """The map ``self o first`` (``first`` acts first)."""
        F = tower
        s = self.sigma
        a1, b1, c1, d1 = (int(F.sigma(v, s)) for v in (first.a, first.b, first.c, first.d))
        a = F.add(F.mul(self.a, a1), F.mul(self.b, c1))
        b = F.add(F.mul(self.a, b1), F.mul(self.b, d1))
        c = F.add(F.mul(self.c, a1), F.mul(self.d, c1))
        d = F.add(F.mul(self.c, b1), F.mul(self.d, d1))
        return SemilinearMap(int(a), int(b), int(c), int(d), (s + first.sigma) % F.degree)

    def inverse(self, tower: FieldTower) -> "SemilinearMap":
        F = tower
        det = self.det(F)
        if det == 0:
            raise PreconditionError("singular matrix")
        di = F.inv(det)
        ia, ib = F.mul(self.d, di), F.negate(F.mul(self.b, di))
        ic, id_ = F.negate(F.mul(self.c, di)), F.mul(self.a, di)
        s = (-self.sigma) % F.degree
        return SemilinearMap(*(int(F.sigma(v, s)) for v in (ia, ib, ic, id_)), s)

    def to_json(self, tower: FieldTower) -> dict:
        enc = tower.encode
        return {
            "matrix": [[enc(self.a), enc(self.b)], [enc(self.c), enc(self.d)]],
            "sigma": self.sigma,
        }

    @classmethod
    def from_json(cls, tower: FieldTower, obj) -> "SemilinearMap":
        try:
            (a, b), (c, d) = obj["matrix"]
            sigma = obj.get("sigma", 0)
        except (KeyError, TypeError, ValueError):
            raise ParseError("semilinear map must look like {'matrix': [[a,b],[c,d]], 'sigma': j}") from None
        if not isinstance(sigma, int) or not 0 <= sigma < tower.degree:
            raise ParseError(f"sigma must be an integer in [0, {tower.degree})")
        return cls(*(tower.decode(v) for v in (a, b, c, d)), sigma)


def apply_semilinear(lam: SemilinearMap, U: Subspace2) -> Subspace2:
    T = U.tower
    if lam.det(T) == 0:
        raise PreconditionError("singular matrix")
    x, y = vec_split(T, U.codes)
    nx, ny = lam.apply(T, x, y)
    bx, by = lam.apply(T, [v[0] for v in U.basis], [v[1] for v in U.basis])
    return Subspace2(T, list(zip(bx.tolist(), by.tolist())), vec_code(T, nx, ny))


# ---------------------------------------------------------------------------
# equivalence search


def _check_guard(tower: FieldTower, force: bool):
    work = tower.order**2
    if work > SEARCH_GUARD:
        if not force:
            raise GuardError(f"search over q^(2t) = {work} pairs exceeds guard {SEARCH_GUARD}")
        log.warning("search guard overridden: %d candidate pairs per automorphism", work)


def _proportional_slope(X, Y, T: FieldTower):
    """Common ratio Y_k / X_k when all basis pairs are F_{q^t}-dependent."""
    r = T.div(Y[0], X[0])
    if all(T.mul(r, x) == y for x, y in zip(X, Y)):
        return int(r)
    return None


def _pivot(X, Y, T: FieldTower):
    t = len(X)
    for i in range(t):
        for j in range(i + 1, t):
            det = T.sub(T.mul(X[i], Y[j]), T.mul(X[j], Y[i]))
            if det:
                return i, j, int(T.inv(det))
    return None


def _scan_sigma(f, g, j, count_all, workers, backend):
    """Scan one automorphism. Returns (count, witness-or-None)."""
    T = f.tower
    basis = np.array(standard_basis(T), dtype=np.int64)
    X = T.sigma_table(j)[basis]
    Y = T.sigma_table(j)[f.values[basis]]
    piv = _pivot(X, Y, T)
    in_l = f.conjugate(j).slope_mask
    if piv is None:
        return _scan_sigma_linear(f, g, j, X, Y, count_all)
    pi, pj, dinv = piv
    tb = T.tables
    scan = kernels.dispatch("equiv_scan", backend)
    plan = kernels.scan_tables(X, Y, pi, pj, dinv, tb)

    def run(rng):
        lo, hi = rng
        return scan(lo, hi, T.order, *kernels.field_args(tb),
                    *plan, pi, pj, g.values, in_l, count_all)

    n = T.order
    workers = max(1, int(workers))
    bounds = np.linspace(0, n, workers + 1).astype(int)
    ranges = [(int(bounds[k]), int(bounds[k + 1])) for k in range(workers) if bounds[k] < bounds[k + 1]]
    if len(ranges) == 1:
        results = [run(ranges[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            results = list(pool.map(run, ranges))
    if count_all:
        return sum(int(r[0]) for r in results), None
    for cnt, a, b, c, d in results:  # ranges are ordered: first hit is least
        if cnt:
            return 1, SemilinearMap(int(a), int(b), int(c), int(d), j)
    return 0, None


def _scan_sigma_linear(f, g, j, X, Y, count_all):
    """f^s(y) = mu y: U_f is an F_{q^t}-line, so U_g must be one too."""
    T = f.tower
    if count_all:
        raise NotScatteredError("stabilizer counting needs a scattered polynomial")
    mu = _proportional_slope(X, Y, T)
    if g.is_zero:
        mu_g = 0
    else:
        basis = standard_basis(T)
        mu_g = _proportional_slope(basis, [g(x) for x in basis], T)
    if mu_g is None:
        return 0, None
    tb = T.tables
    a = T.elements[:, None]
    b = T.elements[None, :]
    s = vadd(a, vmul(b, mu, tb), tb)  # u(x) = s * x^sigma
    ok = s != 0
    # g(u(x)) = mu_g * s * x^s must equal (c + d mu) x^s
    r = vmul(mu_g, s, tb)
    if not ok.any():
        return 0, None
    ia, ib = np.unravel_index(int(np.argmax(ok)), ok.shape)
    aa, bb, rr = int(ia), int(ib), int(r[ia, ib])
    if T.mul(bb, rr) != 0:
        c, d = rr, 0
    else:
        c, d = int(T.sub(rr, mu)), 1
    return 1, SemilinearMap(aa, bb, c, d, j)


def _witness_ok(lam, f, g) -> bool:
    T = f.tower
    x, y = lam.apply(T, T.elements, f.values)
    return lam.det(T) != 0 and bool(np.all(g.values[x] == y)) and len(np.unique(x)) == T.order


def equivalence_fast(f: LinearizedPoly, g: LinearizedPoly, *, force=False, workers=1,
                     backend=None) -> SemilinearMap | None:
    """A semilinear map taking U_f onto U_g, or None if the two are inequivalent."""
    if f.tower is not g.tower:
        raise PreconditionError("polynomials live over different towers")
    if f.is_zero or g.is_zero:
        raise PreconditionError("equivalence needs nonzero polynomials")
    T = f.tower
    _check_guard(T, force)
    if f == g:
        return SemilinearMap.identity()
    for j in T.automorphisms:
        _, lam = _scan_sigma(f, g, j, False, workers, backend)
        if lam is not None:
            assert _witness_ok(lam, f, g), "solver produced an invalid witness"
            return lam
    return None


def equivalence_oracle(f: LinearizedPoly, g: LinearizedPoly, *, backend=None) -> SemilinearMap | None:
    """Brute force over all of GammaL(2, q^t): every invertible matrix, every
    automorphism, every element of U_f. Only for q^t <= 32."""
    if f.tower is not g.tower:
        raise PreconditionError("polynomials live over different towers")
    T = f.tower
    if T.order > ORACLE_GUARD:
        raise GuardError(f"oracle enumeration needs q^t <= {ORACLE_GUARD}")
    tb = T.tables
    scan = kernels.dispatch("oracle_scan", backend)
    for j in T.automorphisms:
        Xs = T.sigma_table(j)
        Ys = T.sigma_table(j)[f.values]
        a, b, c, d = scan(T.order, *kernels.field_args(tb), tb.neg, Xs, Ys, g.values)
        if a >= 0:
            return SemilinearMap(int(a), int(b), int(c), int(d), j)
    return None


def _group_sigmas(tower: FieldTower, group: str):
    if group == "GL":
        return [0]
    if group in ("GammaL", "ΓL", "GaL"):
        return list(tower.automorphisms)
    raise PreconditionError(f"group must be 'GL' or 'GammaL', got {group!r}")


def subspace_stabilizer_count(f: LinearizedPoly, group: str = "GL", *, force=False,
                              workers=1, backend=None) -> int:
    """|{lambda in group : lambda(U_f) = U_f}|."""
    _check_guard(f.tower, force)
    return sum(
        _scan_sigma(f, f, j, True, workers, backend)[0] for j in _group_sigmas(f.tower, group)
    )


def stabilizer_order(f: LinearizedPoly, group: str = "GL", *, force=False, workers=1,
                     backend=None) -> int:
    """Order of the subgroup of ``group`` preserving the spread B_f.

    Equals (q^t - 1) * S / (q - 1) with S the stabilizer of U_f: a map fixes
    B_f exactly when it sends U_f to some h U_f.
    """
    T = f.tower
    if T.q <= 3:
        raise PreconditionError("stabilizer order needs q > 3")
    require_scattered(f)
    S = subspace_stabilizer_count(f, group, force=force, workers=workers, backend=backend)
    num = (T.order - 1) * S
    assert num % (T.q - 1) == 0
    return num // (T.q - 1)


# ---------------------------------------------------------------------------


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values())


def orbit_census(family, *, force=False, workers=1, backend=None) -> list[list[int]]:
    """Partition ``family`` (indices) into GammaL(2, q^t)-orbits of U_f."""
    family = list(family)
    if family and any(f.tower is not family[0].tower for f in family):
        raise PreconditionError("census family spans several towers")
    uf = UnionFind(len(family))
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            if uf.find(i) == uf.find(j):
                continue
            if equivalence_fast(family[i], family[j], force=force, workers=workers,
                                backend=backend) is not None:
                uf.union(i, j)
    return uf.groups()


# ---------------------------------------------------------------------------


def _injective(alpha, beta, mask, T: FieldTower):
    """Whether x -> alpha x + beta f(x) is injective, given L_f as ``mask``."""
    tb = T.tables
    alpha = np.asarray(alpha, dtype=np.int64)
    beta = np.asarray(beta, dtype=np.int64)
    r = T.neg[vmul(alpha, T.exp[T.nm1 - T.log[np.maximum(beta, 1)]], tb)]
    return np.where(beta == 0, alpha != 0, ~mask[r])


def normalize_poly(f: LinearizedPoly) -> tuple[LinearizedPoly, SemilinearMap]:
    """Move U_f by a projectivity so that 0, 1 and infinity avoid the linear set.

    The identity is tried first, then matrices in lexicographic order of
    their entry indices.
    """
    require_scattered(f)
    T = f.tower
    mask = f.slope_mask
    if not mask[0] and not mask[1]:
        return f, SemilinearMap.identity()
    tb = T.tables
    c = T.elements[:, None]
    d = T.elements[None, :]
    for a in range(T.order):
        for b in range(T.order):
            if not _injective(a, b, mask, T):
                continue
            ok = _injective(c, d, mask, T)
            ok &= _injective(vsub(c, a, tb), vsub(d, b, tb), mask, T)
            ok &= vsub(vmul(a, d, tb), vmul(b, c, tb), tb) != 0
            if ok.any():
                ic, id_ = np.unravel_index(int(np.argmax(ok)), ok.shape)
                mu = SemilinearMap(a, b, int(ic), int(id_), 0)
                basis = standard_basis(T)
                u, v = mu.apply(T, basis, f.values[basis])
                g = interpolate_graph(T, zip(u.tolist(), v.tolist()))
                assert not g.slope_mask[0] and not g.slope_mask[1]
                return g, mu
    raise NotScatteredError("no normalizing projectivity found")  # pragma: no cover
