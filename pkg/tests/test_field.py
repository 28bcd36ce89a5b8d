import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scatplane import FieldError, FieldSpec, GuardError, ParseError, build_field
from scatplane.field import FieldTower

from conftest import tower
from reference import ref_for


def test_orders_of_small_towers():
    T = build_field(FieldSpec(2, 2, 3, (1, 1, 0, 1, 1, 0, 1)))
    assert T.order == 64
    assert len(T.subfield) == 4
    assert build_field(p=5, e=1, t=4).order == 625


def test_default_modulus_is_conway():
    # published Conway polynomials: x^6+x^4+x^3+x+1 and x^4+4x^2+4x+2
    assert build_field(p=2, e=2, t=3).modulus == (1, 1, 0, 1, 1, 0, 1)
    assert build_field(p=5, e=1, t=4).modulus == (2, 4, 4, 0, 1)


@pytest.mark.parametrize(
    "spec, err",
    [
        (FieldSpec(2, 2, 3, (1, 0, 0, 0, 0, 0, 1)), FieldError),  # x^6+1 = (x^3+1)^2
        (FieldSpec(2, 2, 3, (1, 1, 0, 1)), FieldError),  # degree 3, not 6
        (FieldSpec(2, 2, 3, (1, 1, 0, 1, 1, 0, 2)), FieldError),  # leading 2 = 0 mod 2
        (FieldSpec(4, 1, 3), FieldError),
        (FieldSpec(2, 1, 1), FieldError),
        (FieldSpec(2, 1, 23), GuardError),
    ],
)
def test_bad_specs_rejected(spec, err):
    with pytest.raises(err):
        FieldTower(spec)


def test_spec_json():
    spec = FieldSpec.from_json({"p": 2, "e": 2, "t": 3})
    assert spec.modulus is None
    assert FieldSpec.from_json(spec.to_json()) == spec
    with_mod = FieldSpec.from_json({"p": 2, "e": 2, "t": 3, "modulus": [1, 1, 0, 1, 1, 0, 1]})
    assert with_mod.modulus == (1, 1, 0, 1, 1, 0, 1)
    for bad in ({"p": 2, "e": 2}, {"p": 2, "e": 2, "t": 3, "extra": 1}, {"p": "2", "e": 2, "t": 3}, [2, 2, 3]):
        with pytest.raises(ParseError):
            FieldSpec.from_json(bad)


def test_arithmetic_laws(T43):
    x = T43.elements
    assert np.array_equal(T43.mul(x, 1), x)
    assert np.all(T43.add(x, T43.negate(x)) == 0)
    g = T43.gpow(1)
    assert g == T43.generator
    assert T43.mul(T43.inv(g), g) == 1
    with pytest.raises(ZeroDivisionError):
        T43.inv(0)


@pytest.mark.parametrize("q, t", [(4, 3), (3, 3), (5, 2), (2, 5)])
def test_tables_match_reference_exhaustively(q, t):
    T = tower(q, t)
    R = ref_for(T)
    n = T.order
    xs, ys = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    mul = T.mul(xs, ys)
    add = T.add(xs, ys)
    for x in range(n):
        for y in range(n):
            assert mul[x, y] == R.mul(x, y)
            assert add[x, y] == R.add(x, y)


@given(st.data())
def test_tables_match_reference_sampled(data):
    T = tower(5, 4)
    R = ref_for(T)
    x = data.draw(st.integers(0, T.order - 1))
    y = data.draw(st.integers(0, T.order - 1))
    k = data.draw(st.integers(0, 3000))
    assert T.mul(x, y) == R.mul(x, y)
    assert T.add(x, y) == R.add(x, y)
    assert T.sub(x, y) == R.add(x, R.neg(y))
    assert T.pow(x, k) == R.pow(x, k)


@pytest.mark.parametrize("q, t", [(4, 3), (5, 4), (3, 3), (2, 6)])
def test_generator_is_least_primitive(q, t):
    T = tower(q, t)
    R = ref_for(T)
    assert R.order_of(T.generator) == T.nm1
    for c in range(2, T.generator):
        assert R.order_of(c) < T.nm1


def test_q_frobenius(T43):
    x = T43.elements
    assert np.array_equal(T43.q_frobenius(x, 0), x)
    assert np.array_equal(T43.q_frobenius(x, T43.t), x)
    assert T43.q_frobenius(T43.gpow(1), 1) == T43.gpow(4)
    R = ref_for(T43)
    assert all(T43.q_frobenius(v, 2) == R.pow(v, 16) for v in range(64))


def test_rel_norm_examples(T43):
    assert T43.rel_norm(1) == 1
    assert T43.rel_norm(0) == 0
    n = T43.rel_norm(T43.gpow(1))
    assert n == T43.gpow(21)
    assert ref_for(T43).order_of(int(n)) == 3


def test_codec(T43):
    assert T43.decode("g^0") == 1
    assert T43.decode("0") == 0
    assert T43.decode(" 17 ") == 17
    assert T43.decode("g^63") == 1
    for x in range(T43.order):
        assert T43.decode(T43.encode(x)) == x
    for bad in ("g^-1", "h^2", "1.5", "", "64", None):
        with pytest.raises(ParseError):
            T43.decode(bad)
    with pytest.raises(ParseError):
        T43.encode(64)


@pytest.mark.parametrize("q, t", [(4, 3), (2, 5), (3, 4), (5, 2), (4, 2), (2, 12), (4, 6)])
def test_frobenius_norm_and_subfield_invariants(q, t):
    T = tower(q, t)
    x = T.elements
    y = x
    for _ in range(t):
        y = T.q_frobenius(y, 1)
    assert np.array_equal(y, x)
    # norm: onto F_q, every nonzero fiber of size (q^t-1)/(q-1)
    norms = T.rel_norm(x)
    assert set(np.unique(norms).tolist()) == set(T.subfield.tolist())
    counts = np.bincount(norms[1:], minlength=T.order)
    assert all(counts[int(a)] == (T.order - 1) // (q - 1) for a in T.subfield if a)
    assert np.array_equal(T.rel_norm(T.mul(x[:, None], x[None, :])), T.mul(norms[:, None], norms[None, :]))
    F = T.subfield
    assert len(F) == q
    assert np.all(np.isin(T.add(F[:, None], F[None, :]), F))
    assert np.all(np.isin(T.mul(F[:, None], F[None, :]), F))
