"""The polynomials P_{b,s}(x) = x^(q^s) + b x^(q^(t-s)): scatteredness,
their hyper-reguli, the b' = b^sigma z^(q^(2s)-1) relation and plane counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotScatteredError, PreconditionError
from .field import FieldSpec, FieldTower, build_field, vmul
from .linpoly import LinearizedPoly, require_scattered, standard_basis
from .spread import HyperRegulus, scaled
from .subspace import Subspace2, UnionFind, equivalence_fast, from_poly, orbit_census, vec_code


@dataclass(frozen=True)
class LPParams:
    b: int
    s: int


def _check_s(tower: FieldTower, s: int):
    if not 1 <= int(s) < tower.t:
        raise PreconditionError(f"s must lie in [1, {tower.t})")


def lp_poly(tower: FieldTower, params: LPParams) -> LinearizedPoly:
    _check_s(tower, params.s)
    t, s = tower.t, params.s
    coeffs = [0] * t
    coeffs[s] = 1
    coeffs[t - s] = int(tower.add(coeffs[t - s], params.b))
    return LinearizedPoly(tower, coeffs)


def scattered_criterion(tower: FieldTower, params: LPParams) -> bool:
    """N(b) != 1 and gcd(s, t) = 1."""
    _check_s(tower, params.s)
    return int(tower.rel_norm(params.b)) != 1 and math.gcd(params.s, tower.t) == 1


def reduce_params(tower: FieldTower, params: LPParams) -> LPParams:
    """(b, s) -> (1/b, t - s) when s > t/2; U_{P_{b,s}} and U_{P_{1/b,t-s}}
    lie in one GL(2, q^t)-orbit."""
    if 2 * params.s > tower.t:
        if params.b == 0:
            raise PreconditionError("b = 0 has no inverse; use s <= t/2 for monomials")
        return LPParams(int(tower.inv(params.b)), tower.t - params.s)
    return params


def fundamental_hyper_regulus(tower: FieldTower, params: LPParams) -> HyperRegulus:
    """{V_{b,d,s}} over the coset representatives d, each built from the
    twisted-coefficient polynomial and checked against d U_{P_{b,s}}."""
    if not scattered_criterion(tower, params):
        raise NotScatteredError("the fundamental hyper-regulus needs N(b) != 1 and gcd(s, t) = 1")
    T = tower
    b, s, t = params.b, params.s, T.t
    U = from_poly(lp_poly(T, params))
    x = T.elements
    tb = T.tables
    basis = standard_basis(T)
    comps = []
    for d in T.coset_reps():
        d = int(d)
        # V_{b,d,s} = {(x, d^(1-q^s) x^(q^s) + b d^(1-q^(t-s)) x^(q^(t-s)))}
        c1 = T.div(d, T.q_frobenius(d, s))
        c2 = T.mul(T.div(d, T.q_frobenius(d, t - s)), b)
        y = T.add(vmul(c1, T.q_frobenius(x, s), tb), vmul(c2, T.q_frobenius(x, t - s), tb))
        V = Subspace2(T, [(e, int(y[e])) for e in basis], vec_code(T, x, y))
        if V != scaled(U, d):
            raise RuntimeError("V_{b,d,s} differs from d U_{P_{b,s}}")
        comps.append(V)
    return HyperRegulus(T, comps)


def _image_modulus(tower: FieldTower, s: int) -> int:
    """Index of the subgroup {z^(q^(2s)-1)} in F_{q^t}^*."""
    return math.gcd(tower.q ** (2 * s) - 1, tower.nm1)


def ejj_equivalent(tower: FieldTower, p1: LPParams, p2: LPParams) -> bool:
    """Whether b2 = b1^sigma z^(q^(2s)-1) for some automorphism sigma and z,
    after reducing both parameter pairs to s <= t/2 (equal s required)."""
    T = tower
    for p in (p1, p2):
        if not scattered_criterion(T, p):
            raise NotScatteredError(f"{p} does not give a scattered polynomial")
    r1, r2 = reduce_params(T, p1), reduce_params(T, p2)
    if 2 * r1.s == T.t:
        raise PreconditionError("2s = t is outside the relation's range")
    if r1.s != r2.s:
        return False
    if r1.b == 0 or r2.b == 0:
        return r1.b == r2.b
    g = _image_modulus(T, r1.s)
    l2 = int(T.log[r2.b])
    for j in T.automorphisms:
        l1 = int(T.log[int(T.sigma(r1.b, j))])
        if (l2 - l1) % g == 0:
            return True
    return False


def _galois_orbits(elements, frob) -> int:
    """Number of orbits of x -> frob[x] on ``elements``."""
    todo = set(int(x) for x in elements)
    count = 0
    while todo:
        x = todo.pop()
        count += 1
        y = int(frob[x])
        while y != x:
            todo.discard(y)
            y = int(frob[y])
    return count


def _prime_power(q: int) -> tuple[int, int]:
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e = round(math.log(q, p))
    if p**e != q:
        raise PreconditionError(f"{q} is not a prime power")
    return p, e


def orbit_count_theorem(q: int, t: int) -> int:
    """Galois orbits on F_q \\ {0, 1} (t odd) or on F_{q^2} minus the
    (q-1)-th powers (t even), counted by walking the Frobenius."""
    if q <= 3 or t <= 3:
        raise PreconditionError("the count is stated for q > 3 and t > 3")
    p, e = _prime_power(q)
    Fq2 = build_field(FieldSpec(p, e, 2))
    frob = Fq2.sigma_table(1)
    if t % 2:
        pts = [x for x in Fq2.subfield if x not in (0, 1)]
    else:
        powers = set(np.unique(Fq2.pow(Fq2.elements, q - 1)).tolist())
        pts = [x for x in Fq2.elements if int(x) not in powers]
    return _galois_orbits(pts, frob)


def n_lower_bound(q: int, t: int) -> Fraction:
    """(q-2)/e * phi(t)/2 for odd t, (q^2-1-(q+1))/(2e) * phi(t)/2 for even t."""
    _, e = _prime_power(q)
    phi = sum(1 for k in range(1, t + 1) if math.gcd(k, t) == 1)
    if t % 2:
        return Fraction(q - 2, e) * Fraction(phi, 2)
    return Fraction(q * q - 1 - (q + 1), 2 * e) * Fraction(phi, 2)


def census_representatives(tower: FieldTower, s: int) -> list[int]:
    """One nonzero b per coset of {z^(q^(2s)-1)}, skipping N(b) = 1.

    The relation only sees b through its coset, so these cover every
    scattered P_{b,s} with b != 0; Galois conjugates are left for the solver.
    """
    T = tower
    g = _image_modulus(T, s)
    reps = [T.gpow(k) for k in range(g)]
    return [b for b in reps if int(T.rel_norm(b)) != 1]


def _partition_from(n: int, related) -> list[list[int]]:
    uf = UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if related(i, j):
                uf.union(i, j)
    return uf.groups()


def _fraction_json(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def lp_census(tower: FieldTower, s: int | None = None, **kw) -> dict:
    """Solver-based classification of the scattered U_{P_{b,s}}.

    With ``s`` given, only that s (reduced to s <= t/2) is classified;
    the all-s total over every admissible s <= t/2 is always reported.
    """
    T = tower
    q, t = T.q, T.t
    all_s = [k for k in range(1, t // 2 + 1) if math.gcd(k, t) == 1 and 2 * k != t]
    if s is not None:
        _check_s(T, s)
        s_red = min(s, t - s)
        if s_red not in all_s:
            raise NotScatteredError(f"no scattered P_(b,s) for s={s} (gcd(s, t) != 1)")
    per_s = {}
    class_reps: list[LinearizedPoly] = []
    class_s: list[int] = []
    for k in all_s:
        reps = [LPParams(b, k) for b in census_representatives(T, k)]
        polys = [lp_poly(T, p) for p in reps]
        for f in polys:
            require_scattered(f)
        solver = orbit_census(polys, **kw)
        ejj = _partition_from(len(reps), lambda i, j: ejj_equivalent(T, reps[i], reps[j]))
        per_s[k] = {
            "representatives": [T.encode(p.b) for p in reps],
            "classes": len(solver),
            "partition": solver,
            "agree_solver_vs_ejj": solver == ejj,
        }
        class_reps += [polys[cls[0]] for cls in solver]
        class_s += [k] * len(solver)
    # classes for different s: the relation says never equivalent, the
    # solver checks it independently
    uf = UnionFind(len(class_reps))
    for i in range(len(class_reps)):
        for j in range(i + 1, len(class_reps)):
            if class_s[i] != class_s[j] and uf.find(i) != uf.find(j):
                if equivalence_fast(class_reps[i], class_reps[j], **kw) is not None:
                    uf.union(i, j)
    total = len(uf.groups())
    out = {"q": q, "t": t, "s_values": all_s, "classes_all_s": total}
    try:
        theorem = orbit_count_theorem(q, t)
    except PreconditionError:
        theorem = None
    bound = n_lower_bound(q, t)
    out["theorem_count"] = theorem
    out["lower_bound"] = _fraction_json(bound)
    out["all_s_meets_lower_bound"] = total >= bound
    out["theorem_matches_all_s"] = theorem == total if theorem is not None else None
    if s is not None:
        sel = per_s[s_red]
        out.update({
            "s": s,
            "s_reduced": s_red,
            "classes": sel["classes"],
            "representatives": sel["representatives"],
            "partition": sel["partition"],
            "agree_solver_vs_ejj": sel["agree_solver_vs_ejj"],
            "theorem_matches_fixed_s": theorem == sel["classes"] if theorem is not None else None,
        })
    else:
        out["agree_solver_vs_ejj"] = all(v["agree_solver_vs_ejj"] for v in per_s.values())
    out["per_s"] = {str(k): {kk: v for kk, v in val.items() if kk != "partition"} for k, val in per_s.items()}
    return out
