"""Spreads of F_{q^t}^2: the Desarguesian one, B_f, hyper-regulus
replacements and Andre nets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotScatteredError, PreconditionError
from .field import FieldTower, vmul
from .linpoly import LinearizedPoly, max_linear_set_size, require_scattered, standard_basis
from .subspace import Subspace2, desarguesian_line, from_poly, vec_code, vec_scale

INFINITY = "inf"


@dataclass(frozen=True)
class Tag:
    """``kind`` is "line" (slope ``value``, None for x = 0) or "replaced"."""

    kind: str
    value: int | None

    def encode(self, tower: FieldTower) -> str:
        if self.value is None:
            return f"{self.kind}:{INFINITY}"
        return f"{self.kind}:{tower.encode(self.value)}"


class Spread:
    """A list of F_q-subspaces meant to partition F_{q^t}^2 \\ {0}.

    Nothing is enforced on construction so that broken spreads can be built
    and then rejected by :func:`verify_planar`.
    """

    def __init__(self, tower: FieldTower, components, tags=None):
        self.tower = tower
        self.components = list(components)
        self.tags = list(tags) if tags is not None else [Tag("replaced", None)] * len(self.components)
        if len(self.tags) != len(self.components):
            raise PreconditionError("one tag per component")

    def __len__(self):
        return len(self.components)

    def fingerprints(self) -> list[str]:
        return sorted(U.fingerprint for U in self.components)

    def __eq__(self, other):
        """Same set of components, regardless of order or tags."""
        return (
            isinstance(other, Spread)
            and other.tower is self.tower
            and self.fingerprints() == other.fingerprints()
        )

    def __hash__(self):
        return hash(tuple(self.fingerprints()))

    def without(self, index: int) -> "Spread":
        keep = [k for k in range(len(self)) if k != index]
        return Spread(self.tower, [self.components[k] for k in keep], [self.tags[k] for k in keep])

    def with_duplicate(self, index: int) -> "Spread":
        return Spread(
            self.tower,
            self.components + [self.components[index]],
            self.tags + [self.tags[index]],
        )

    def counts(self) -> dict:
        replaced = sum(tag.kind == "replaced" for tag in self.tags)
        return {"components": len(self), "replaced": replaced, "desarguesian": len(self) - replaced}

    def report(self, planar: bool | None = None) -> dict:
        if planar is None:
            planar = verify_planar(self).planar
        return {
            **self.counts(),
            "planar": planar,
            "tags": [tag.encode(self.tower) for tag in self.tags],
        }


@dataclass
class PlanarReport:
    planar: bool
    size_ok: bool
    components_ok: bool
    partition_ok: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "planar": self.planar,
            "size_ok": self.size_ok,
            "components_ok": self.components_ok,
            "partition_ok": self.partition_ok,
            "witness": self.witness,
        }


def _owner_counts(tower: FieldTower, components) -> np.ndarray:
    n2 = tower.order**2
    counts = np.zeros(n2, dtype=np.int64)
    for U in components:
        counts += np.bincount(U.codes, minlength=n2)
    return counts


def verify_planar(S: Spread) -> PlanarReport:
    """q^t + 1 components of size q^t, every nonzero vector in exactly one."""
    T = S.tower
    n = T.order
    size_ok = len(S) == n + 1
    sizes = [len(U) for U in S.components]
    comp_ok = all(s == n for s in sizes) and all(U.codes[0] == 0 for U in S.components)
    counts = _owner_counts(T, S.components)
    counts[0] = 1
    bad = np.flatnonzero(counts != 1)
    witness = None
    if len(bad):
        v = int(bad[0])
        owners = [k for k, U in enumerate(S.components) if (divmod(v, n) in U)]
        x, y = divmod(v, n)
        witness = {"vector": [T.encode(x), T.encode(y)], "components": owners}
    elif not comp_ok:
        k = next(k for k, s in enumerate(sizes) if s != n)
        witness = {"component": k, "size": sizes[k]}
    elif not size_ok:
        witness = {"component_count": len(S)}
    part_ok = not len(bad)
    return PlanarReport(size_ok and comp_ok and part_ok, size_ok, comp_ok, part_ok, witness)


# ---------------------------------------------------------------------------


def desarguesian(tower: FieldTower) -> Spread:
    comps = [desarguesian_line(tower, None)]
    tags = [Tag("line", None)]
    for m in tower.elements:
        comps.append(desarguesian_line(tower, int(m)))
        tags.append(Tag("line", int(m)))
    return Spread(tower, comps, tags)


def scaled(U: Subspace2, h: int) -> Subspace2:
    """h U = {(h x, h y)}."""
    T = U.tower
    basis = [(int(T.mul(h, x)), int(T.mul(h, y))) for x, y in U.basis]
    return Subspace2(T, basis, vec_scale(T, h, U.codes))


def spread_from_poly(f: LinearizedPoly) -> Spread:
    """V_inf, the lines <(1, m)> with m outside L_f, then h U_f per coset of F_q^*."""
    try:
        require_scattered(f)
    except NotScatteredError:
        raise NotScatteredError("B_f is a spread only for scattered f") from None
    T = f.tower
    comps = [desarguesian_line(T, None)]
    tags = [Tag("line", None)]
    for m in np.flatnonzero(~f.slope_mask):
        comps.append(desarguesian_line(T, int(m)))
        tags.append(Tag("line", int(m)))
    U = from_poly(f)
    for h in T.coset_reps():
        comps.append(scaled(U, int(h)))
        tags.append(Tag("replaced", int(h)))
    return Spread(T, comps, tags)


class HyperRegulus:
    """(q^t - 1)/(q - 1) pairwise complementary subspaces."""

    def __init__(self, tower: FieldTower, components):
        self.tower = tower
        self.components = list(components)
        size = max_linear_set_size(tower)
        if len(self.components) != size:
            raise PreconditionError(f"a hyper-regulus has {size} components, got {len(self.components)}")
        counts = _owner_counts(tower, self.components)
        counts[0] = 0
        if counts.max(initial=0) > 1:
            raise PreconditionError("hyper-regulus components must meet trivially")

    def __len__(self):
        return len(self.components)

    def cover(self) -> np.ndarray:
        """Sorted codes of every vector in some component (0 included)."""
        return np.unique(np.concatenate([U.codes for U in self.components]))

    def fingerprints(self) -> list[str]:
        return sorted(U.fingerprint for U in self.components)


def hyper_regulus_pair(f: LinearizedPoly):
    """(inner, outer, cover_equal): the lines with slope in L_f, the h U_f,
    and whether both cover the same vectors."""
    require_scattered(f)
    T = f.tower
    inner = HyperRegulus(T, [desarguesian_line(T, int(m)) for m in np.flatnonzero(f.slope_mask)])
    U = from_poly(f)
    outer = HyperRegulus(T, [scaled(U, int(h)) for h in T.coset_reps()])
    return inner, outer, bool(np.array_equal(inner.cover(), outer.cover()))


def twisted_line(tower: FieldTower, m: int, exponent: int) -> Subspace2:
    """{(x, x^(q^exponent) m)}."""
    T = tower
    x = T.elements
    y = vmul(T.q_frobenius(x, exponent), m, T.tables)
    basis = [(b, int(y[b])) for b in standard_basis(T)]
    return Subspace2(T, basis, vec_code(T, x, y))


def andre_spread(tower: FieldTower, exponents: dict) -> Spread:
    """Replace each Andre net {<(1, m)> : N(m) = xi} by {(x, x^(q^k) m)}
    with k = exponents[xi]; nets missing from ``exponents`` stay put."""
    T = tower
    for xi, k in exponents.items():
        if not (int(xi) != 0 and T.in_subfield(int(xi))):
            raise PreconditionError("Andre nets are indexed by nonzero elements of F_q")
        if not 0 <= int(k) < T.t:
            raise PreconditionError(f"exponent must lie in [0, {T.t})")
    norms = T.rel_norm(T.elements)
    comps = [desarguesian_line(T, None)]
    tags = [Tag("line", None)]
    twisted = []
    for m in T.elements:
        k = int(exponents.get(int(norms[m]), 0)) if m else 0
        if k == 0:
            comps.append(desarguesian_line(T, int(m)))
            tags.append(Tag("line", int(m)))
        else:
            twisted.append((twisted_line(T, int(m), k), Tag("replaced", int(m))))
    comps += [c for c, _ in twisted]
    tags += [t for _, t in twisted]
    return Spread(T, comps, tags)


def pseudoregulus_poly(tower: FieldTower, omega: int, s: int) -> LinearizedPoly:
    """omega x^(q^s), checking gcd(s, t) = 1 and N(omega) not in {0, 1}."""
    T = tower
    if math.gcd(int(s), T.t) != 1:
        raise PreconditionError("pseudoregulus type needs gcd(s, t) = 1")
    if int(T.rel_norm(int(omega))) in (0, 1):
        raise PreconditionError("pseudoregulus type needs N(omega) not in {0, 1}")
    return LinearizedPoly.monomial(T, int(s), int(omega))


def pseudoregulus_spread(tower: FieldTower, omega: int, s: int) -> Spread:
    return spread_from_poly(pseudoregulus_poly(tower, omega, s))
