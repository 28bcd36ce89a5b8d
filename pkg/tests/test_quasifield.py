import numpy as np
import pytest

from scatplane import (
    GuardError,
    LPParams,
    LinearizedPoly,
    NotScatteredError,
    PreconditionError,
    Quasifield,
    build_quasifield,
    kernel,
    lp_poly,
    normalize_poly,
    structure_flags,
    verify_axioms,
)
from scatplane.quasifield import check_loop, fiber_representatives

from conftest import tower


def lp_quasifield(T, k=1, s=1):
    f = lp_poly(T, LPParams(T.gpow(k), s))
    g, _ = normalize_poly(f)
    return build_quasifield(g)


@pytest.fixture
def Q43(T43):
    return lp_quasifield(T43)


def test_product_off_the_linear_set(Q43, T43):
    x = T43.elements
    for m in np.flatnonzero(~Q43.slope_mask):
        assert np.array_equal(Q43.row(m), T43.mul(x, int(m)))


def test_right_identity_and_subfield_scalars(Q43, T43):
    for m in range(T43.order):
        assert Q43.mul(1, m) == m
        for a in T43.subfield:
            assert Q43.mul(a, m) == T43.mul(a, m)


def test_well_defined_for_every_fiber_representative(Q43, T43):
    f = Q43.poly
    x = T43.elements
    for m in np.flatnonzero(Q43.slope_mask):
        fiber = T43.nonzero[f.slopes == m]
        assert len(fiber) == T43.q - 1
        rows = {tuple(T43.mul(f.values[T43.mul(h, x)], T43.inv(h)).tolist()) for h in fiber}
        assert len(rows) == 1
        assert Q43.fiber_rep[m] == fiber.min()


def test_rows_are_fq_linear_bijections(Q43, T43):
    x = T43.elements
    F = T43.subfield
    for m in range(1, T43.order):
        r = Q43.row(m)
        assert np.array_equal(np.sort(r), x)
        assert np.array_equal(r[T43.add(x[:, None], x[None, :])], T43.add(r[:, None], r[None, :]))
        for a in F:
            assert np.array_equal(r[T43.mul(a, x)], T43.mul(a, r))


def test_axioms_pass_and_kernel_is_fq(Q43, T43, backend):
    rep = verify_axioms(Q43, backend)
    assert rep.passed
    assert rep.kernel_order == 4
    assert kernel(Q43, backend) == frozenset(T43.subfield.tolist())
    assert 1 in kernel(Q43, backend)
    assert rep.to_json() == {
        "loop": True,
        "left_distributive": True,
        "solvability": True,
        "kernel_order": 4,
        "right_distributive": False,
        "associative": False,
        "counterexample": None,
    }


def test_structure_flags(Q43, T43, backend):
    flags = structure_flags(Q43, backend)
    assert not flags["right_distributive"] and not flags["associative"]
    w = flags["right_distributive_witness"]
    x, m, n = (T43.decode(w[k]) for k in ("x", "m", "n"))
    assert Q43.mul(x, T43.add(m, n)) != T43.add(Q43.mul(x, m), Q43.mul(x, n))
    w = flags["associative_witness"]
    a, b, c = (T43.decode(w[k]) for k in ("x", "y", "z"))
    assert Q43.mul(Q43.mul(a, b), c) != Q43.mul(a, Q43.mul(b, c))
    ctrl = Quasifield.field_product(T43)
    cf = structure_flags(ctrl, backend)
    assert cf["right_distributive"] and cf["associative"]
    assert verify_axioms(ctrl, backend).passed
    assert kernel(ctrl, backend) == frozenset(range(T43.order))


def test_kernel_at_5_4():
    T = tower(5, 4)
    Q = lp_quasifield(T)
    K = kernel(Q)
    assert len(K) == 5 and K == frozenset(T.subfield.tolist())


def test_solve(Q43, T43):
    a, b, c = 5, 9, 17
    x = Q43.solve(a, b, c)
    assert Q43.mul(x, a) == T43.add(Q43.mul(x, b), c)
    with pytest.raises(PreconditionError):
        Q43.solve(4, 4, 1)


def test_tampered_table_fails(Q43, T43):
    tab = Q43.table.copy()
    tab[7, [3, 11]] = tab[7, [11, 3]]
    bad = Quasifield.from_table(T43, tab)
    rep = verify_axioms(bad)
    assert not rep.passed
    assert rep.counterexample is not None
    assert not rep.left_distributive
    tab2 = Q43.table.copy()
    tab2[5, 1], tab2[6, 1] = tab2[6, 1], tab2[5, 1]
    w = check_loop(Quasifield.from_table(T43, tab2))
    assert w["check"] == "left_identity"


def test_build_preconditions(T43):
    with pytest.raises(PreconditionError):
        build_quasifield(LinearizedPoly.monomial(tower(2, 5), 1))
    with pytest.raises(NotScatteredError):
        build_quasifield(LinearizedPoly.identity(T43))
    x_q = LinearizedPoly.monomial(T43, 1)
    assert x_q.slope_mask[1]
    with pytest.raises(PreconditionError):
        build_quasifield(x_q)
    with pytest.raises(PreconditionError):
        Quasifield(T43)
    with pytest.raises(PreconditionError):
        Quasifield.from_table(T43, np.zeros((3, 3)))


def test_table_guard():
    T = tower(4, 6)
    g, _ = normalize_poly(LinearizedPoly.monomial(T, 1, T.gpow(1)))
    Q = build_quasifield(g)
    with pytest.raises(GuardError):
        Q.table
    assert Q.mul(1, 77) == 77  # rows stay available


def test_fiber_representatives(T43):
    f = lp_poly(T43, LPParams(T43.gpow(1), 1))
    rep = fiber_representatives(f)
    for m in range(T43.order):
        xs = [x for x in range(1, T43.order) if f.slopes[x - 1] == m]
        assert rep[m] == (min(xs) if xs else 0)


@pytest.mark.parametrize("q, t", [(3, 3), (5, 3), (4, 4), (3, 4)])
def test_axioms_on_other_towers(q, t):
    T = tower(q, t)
    Q = lp_quasifield(T)
    rep = verify_axioms(Q)
    assert rep.passed and rep.kernel_order == q
