import numpy as np
import pytest

from scatplane import (
    GuardError,
    LPParams,
    LinearizedPoly,
    NotScatteredError,
    PreconditionError,
    collineation_order,
    desarguesian,
    lp_poly,
    plane_from_spread,
    planes_isomorphic,
    spread_from_poly,
    verify_affine,
)
from scatplane.plane import coset_labels

from conftest import tower


def lp_plane(T, k=1):
    return plane_from_spread(spread_from_poly(lp_poly(T, LPParams(T.gpow(k), 1))))


def test_counts():
    A = lp_plane(tower(4, 2))
    assert (A.n_points, A.n_lines, A.points_per_line, A.lines_per_point) == (256, 272, 16, 17)
    assert A.report() == {"points": 256, "lines": 272}
    B = lp_plane(tower(4, 3))
    assert (B.n_points, B.n_lines) == (4096, 4160)


def test_parallel_classes_partition_points(backend):
    T = tower(4, 2)
    A = lp_plane(T)
    for c in range(len(A.spread)):
        labels, reps = coset_labels(A, c, backend)
        counts = np.bincount(labels, minlength=T.order)
        assert len(reps) == T.order and np.all(counts == T.order)
        # representatives are the least point of their line
        first = np.full(T.order, T.order**2)
        np.minimum.at(first, labels, np.arange(T.order**2))
        assert np.array_equal(first, reps)


def test_line_through(T43):
    A = lp_plane(T43)
    for c in (0, 10, 60):
        labels, reps = coset_labels(A, c)
        for P in (0, 77, 4095):
            assert A.line_through(c, P) == (c, int(reps[labels[P]]))


@pytest.mark.parametrize("q", [4, 5, 3])
def test_direct_mode_passes(q, backend):
    T = tower(q, 2)
    rep = verify_affine(lp_plane(T), "direct", backend)
    assert rep.passed and rep.witness is None
    assert rep.to_json() == {"mode": "direct", "affine_axioms": "pass", "witness": None}
    assert verify_affine(plane_from_spread(desarguesian(T)), "direct", backend).passed


def test_direct_mode_at_4_3():
    assert verify_affine(lp_plane(tower(4, 3)), "direct").passed


def test_tampered_planes_fail_with_witness(backend):
    T = tower(4, 2)
    S = spread_from_poly(lp_poly(T, LPParams(T.gpow(1), 1)))
    bad = plane_from_spread(S.without(4).with_duplicate(9), check=False)
    rep = verify_affine(bad, "direct", backend)
    assert not rep.passed
    w = rep.witness
    assert w["common_points"] > 1
    pts = [(T.decode(x), T.decode(y)) for x, y in w["points"]]
    assert len(pts) == 2 and pts[0] != pts[1]
    (c1, _), (c2, _) = w["lines"]
    for c in (c1, c2):
        U = bad.spread.components[c]
        dx = T.sub(pts[0][0], pts[1][0])
        dy = T.sub(pts[0][1], pts[1][1])
        assert (dx, dy) in U  # both points on a line of class c
    short = plane_from_spread(S.without(3), check=False)
    assert not verify_affine(short, "direct", backend).passed
    assert not verify_affine(short, "structural").passed


def test_direct_agrees_with_structural():
    for q in (3, 4):
        T = tower(q, 2)
        S = spread_from_poly(lp_poly(T, LPParams(T.gpow(1), 1)))
        cases = [S, desarguesian(T), S.without(2), S.with_duplicate(0), S.without(5).with_duplicate(1)]
        for sp in cases:
            A = plane_from_spread(sp, check=False)
            assert verify_affine(A, "direct").passed == verify_affine(A, "structural").passed


def test_plane_preconditions(T43):
    S = desarguesian(T43)
    with pytest.raises(PreconditionError):
        plane_from_spread(S.without(0))
    with pytest.raises(GuardError):
        verify_affine(plane_from_spread(desarguesian(tower(2, 9))), "direct")
    with pytest.raises(PreconditionError):
        verify_affine(plane_from_spread(S), "both")


def test_planes_isomorphic(T45):
    f1, f2, f4 = (LinearizedPoly.monomial(T45, s) for s in (1, 2, 4))
    assert planes_isomorphic(f1, f4) is not None
    assert planes_isomorphic(f1, f2) is None
    assert planes_isomorphic(f1, f1).matrix == ((1, 0), (0, 1))
    T3 = tower(3, 3)
    with pytest.raises(PreconditionError):
        planes_isomorphic(LinearizedPoly.monomial(T3, 1), LinearizedPoly.monomial(T3, 2))
    with pytest.raises(NotScatteredError):
        planes_isomorphic(f1, LinearizedPoly.identity(T45))


def test_isomorphism_is_an_equivalence_relation(T45):
    fam = [LinearizedPoly.monomial(T45, s, T45.gpow(k)) for s in (1, 2, 3, 4) for k in (0, 5)]
    iso = [[planes_isomorphic(f, g) is not None for g in fam] for f in fam]
    n = len(fam)
    for i in range(n):
        assert iso[i][i]
        for j in range(n):
            assert iso[i][j] == iso[j][i]
            for k in range(n):
                if iso[i][j] and iso[j][k]:
                    assert iso[i][k]


def test_collineation_order_divisible():
    for q, t in [(4, 3), (5, 3), (4, 4)]:
        T = tower(q, t)
        f = lp_poly(T, LPParams(T.gpow(1), 1))
        for group in ("GL", "GammaL"):
            assert collineation_order(f, group) % (T.order - 1) == 0
