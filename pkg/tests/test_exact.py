from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nkcontact.contact import build_standard_example
from nkcontact.exact import (
    Tensor,
    antisymmetrize,
    apply,
    compose,
    contract,
    format_rational,
    pair,
    parse_rational,
    parse_rational_list,
    rational_inverse,
    symmetrize,
    tensor_product,
    trace,
)
from nkcontact.frame import FrameManifold
from nkcontact.geometry import Geometry

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def bilinear(dim):
    return st.lists(rationals, min_size=dim * dim, max_size=dim * dim).map(
        lambda xs: Tensor(np.array(xs, dtype=object).reshape(dim, dim), (2, 0)))


@pytest.mark.parametrize("text, value", [
    ("3/4", Fraction(3, 4)), ("-3/4", Fraction(-3, 4)), ("7", Fraction(7)),
    (" 6/8 ", Fraction(3, 4)), (5, Fraction(5)), (Fraction(1, 3), Fraction(1, 3)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["0.5", "1e3", "1/0", "", "a/b", True, 0.5, None])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational_is_canonical():
    assert format_rational(Fraction(6, -8)) == "-3/4"
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(0) == "0"


def test_parse_rational_list():
    assert parse_rational_list("0,1/2,1,2") == [0, Fraction(1, 2), 1, 2]
    assert parse_rational_list("") == []


@given(rationals)
def test_format_parse_round_trip(x):
    assert parse_rational(format_rational(x)) == x


@given(rationals, rationals, rationals)
def test_rational_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a.denominator > 0


def test_tensor_is_immutable_and_validated():
    t = Tensor.identity(3)
    with pytest.raises(ValueError):
        t.components[0, 0] = 5
    with pytest.raises(ValueError):
        Tensor(np.zeros((3, 2), dtype=object), (2, 0))
    with pytest.raises(ValueError):
        Tensor(np.zeros((3, 3), dtype=object), (1, 0))


def test_tensor_arithmetic_checks_valence():
    with pytest.raises(ValueError):
        Tensor.identity(3) + Tensor.zeros(3, (2, 0))
    with pytest.raises(ValueError):
        Tensor.identity(3) + Tensor.identity(5)


def test_eta_tensor_eta_on_delta_frame():
    S = build_standard_example(Fraction(1, 2)).structure
    ee = tensor_product(S.eta, S.eta)
    assert ee.valence == (2, 0)
    expected = np.full((3, 3), Fraction(0), dtype=object)
    expected[0, 0] = Fraction(1)
    assert ee == Tensor(expected, (2, 0))


def test_product_with_zero_is_zero():
    a = Tensor.from_function(3, (1, 1), lambda i, j: Fraction(i + 2 * j + 1))
    assert tensor_product(a, Tensor.zeros(3, (2, 0))).is_zero()


def test_g_tensor_g():
    g = FrameManifold.abelian(1).g
    gg = tensor_product(g, g)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    assert gg[i, j, k, l] == int(i == j) * int(k == l)


def test_product_orders_covariant_slots_first():
    V = Tensor.vector([1, 2, 3])
    eta = Tensor.covector([5, 0, 1])
    t = tensor_product(V, eta)
    assert t.valence == (1, 1)
    assert t[2, 1] == 1 * 2  # eta_2 * V^1
    assert contract(t, 0, 0).components.item() == pair(eta, V) == 8


def test_contract_identity_is_dimension():
    assert trace(Tensor.identity(3)) == 3


def test_contract_q_star_half():
    geo = Geometry(*_half())
    assert trace(geo.star.q_star) == Fraction(-3, 2)


def test_contract_h_vanishes():
    for d in (Fraction(0), Fraction(1, 2), Fraction(2)):
        assert trace(build_standard_example(d).structure.h) == 0


def test_contract_slot_errors():
    with pytest.raises(IndexError):
        contract(Tensor.zeros(3, (2, 0)), 0, 0)


def test_symmetrize_examples():
    anti = Tensor.from_function(3, (2, 0), lambda i, j: Fraction(i - j))
    assert symmetrize(anti).is_zero()
    assert antisymmetrize(FrameManifold.abelian(1).g).is_zero()
    rs = Geometry(*_half()).star.ric_star
    assert symmetrize(rs) == rs
    with pytest.raises(ValueError):
        symmetrize(Tensor.identity(3))


@given(bilinear(3))
def test_sym_plus_antisym_reconstructs(t):
    assert symmetrize(t) + antisymmetrize(t) == t


@given(st.lists(rationals, min_size=3, max_size=3), st.lists(rationals, min_size=3, max_size=3))
def test_contraction_of_vector_and_form_is_pairing(v, w):
    V, eta = Tensor.vector(v), Tensor.covector(w)
    assert contract(tensor_product(V, eta), 0, 0).components.item() == sum(a * b for a, b in zip(v, w))


def test_apply_and_compose():
    phi = build_standard_example(0).structure.phi
    e2, e3 = Tensor.basis_vector(3, 1), Tensor.basis_vector(3, 2)
    assert apply(phi, e2) == e3
    assert apply(phi, e3) == -e2
    assert apply(compose(phi, phi), e2) == -e2


def test_rational_inverse():
    m = np.array([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]], dtype=object)
    inv = rational_inverse(m)
    assert (m.dot(inv) == np.array([[1, 0], [0, 1]])).all()
    with pytest.raises(ZeroDivisionError):
        rational_inverse(np.array([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], dtype=object))


def test_repr_uses_rational_strings():
    assert "1/2" in repr(Tensor.vector([Fraction(1, 2), 0, 0]))


def _half():
    ex = build_standard_example(Fraction(1, 2))
    return ex.manifold, ex.structure
