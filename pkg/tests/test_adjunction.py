import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fbcat.adjunction import (
    chi,
    chi_inv,
    chi_witness,
    counit_kills_relations,
    counit_varphi,
    psi_prime,
    psi_prime_map,
    triangle_check,
    unit_alpha,
    unit_alpha_prime,
)
from fbcat.corpus import enumerate_basic_subcategories, get_instance, random_module
from fbcat.fincat import RepMorphism, nat_transformations, yoneda
from fbcat.gencogen import cogen_level

CASES = ["truncpoly:2", "truncpoly:3", "a_n:2", "a_n:3"]


def _subcategory(inst, j):
    subs = enumerate_basic_subcategories(inst)
    return subs[j % len(subs)][1]


def test_dual_numbers_smoke():
    inst = get_instance("truncpoly:2")
    madd = inst.add_of(["P"])
    S = inst.module("S")
    assert psi_prime(madd.psi(S), madd).dims == (1,)
    assert unit_alpha(S, madd).is_iso()
    w = chi_witness(S, madd.psi(S), madd)
    assert (w.left.dim, w.right.dim) == (1, 1)
    assert w.is_inverse_pair()
    assert counit_varphi(S, madd).is_iso()


def test_psi_on_self_injective_algebra_is_the_dual():
    inst = get_instance("truncpoly:3")
    madd = inst.add_of(["U3"])
    for name in inst.indecomposables:
        assert madd.psi(inst.module(name)).dims == inst.module(name).dims


@given(st.sampled_from(CASES), st.integers(0, 10_000), st.integers(0, 100))
def test_chi_is_a_bijection(name, seed, j):
    inst = get_instance(name)
    madd = _subcategory(inst, j)
    X = random_module(inst, seed)
    Z = random_module(madd.category, seed + 1, covariant=True)
    w = chi_witness(X, Z, madd)
    assert w.left.dim == w.right.dim
    assert w.is_inverse_pair()


@given(st.sampled_from(CASES), st.integers(0, 10_000), st.integers(0, 100))
def test_single_morphism_chi_round_trip(name, seed, j):
    inst = get_instance(name)
    madd = _subcategory(inst, j)
    X = random_module(inst, seed)
    Z = random_module(madd.category, seed + 1, covariant=True)
    for g in nat_transformations(Z, madd.psi(X)).basis_morphisms()[:3]:
        u = chi_inv(g, madd, X)
        assert u.is_natural()
        assert chi(u, madd).equals(g)


@given(st.sampled_from(CASES), st.integers(0, 10_000), st.integers(0, 100))
def test_triangle_identities(name, seed, j):
    inst = get_instance(name)
    madd = _subcategory(inst, j)
    X = random_module(inst, seed)
    Z = random_module(madd.category, seed + 1, covariant=True)
    assert triangle_check(X, Z, madd)


@given(st.sampled_from(CASES), st.integers(0, 10_000), st.integers(0, 100))
def test_units_are_natural(name, seed, j):
    inst = get_instance(name)
    madd = _subcategory(inst, j)
    X, Y = random_module(inst, seed), random_module(inst, seed + 1)
    aX, aY = unit_alpha(X, madd), unit_alpha(Y, madd)
    assert aX.is_natural()
    for u in nat_transformations(X, Y).basis_morphisms()[:3]:
        lhs = psi_prime_map(madd.psi_map(u), madd) @ aX
        assert lhs.equals(aY @ u)
    Z = random_module(madd.category, seed + 2, covariant=True)
    assert unit_alpha_prime(Z, madd).is_natural()


@pytest.mark.parametrize("name", CASES)
def test_unit_is_iso_on_the_subcategory(name):
    inst = get_instance(name)
    for _names, madd in enumerate_basic_subcategories(inst)[:20]:
        for M in madd.objects:
            assert unit_alpha(M, madd).is_iso()
            assert counit_varphi(M, madd).is_iso()


@pytest.mark.parametrize("name", CASES)
def test_unit_iso_exactly_on_cogen1(name):
    inst = get_instance(name)
    for _names, madd in enumerate_basic_subcategories(inst)[:20]:
        for X in inst.indecomposable_reps():
            assert unit_alpha(X, madd).is_iso() == (cogen_level(X, madd, 1) >= 1)


@given(st.sampled_from(CASES), st.integers(0, 10_000), st.integers(0, 100))
def test_counit_kills_balancing_relations(name, seed, j):
    inst = get_instance(name)
    madd = _subcategory(inst, j)
    assert counit_kills_relations(random_module(inst, seed), madd)


def test_psi_prime_recovers_projectives():
    inst = get_instance("a_n:3")
    madd = inst.add_of(inst.generator_cogenerator())
    C = inst.category
    for P in range(C.n):
        assert psi_prime(madd.psi_projective(P), madd).dims == yoneda(C, P).dims


def test_wrong_variance_is_rejected():
    inst = get_instance("truncpoly:2")
    madd = inst.add_of(["P"])
    with pytest.raises(ValueError):
        chi_witness(inst.module("S"), madd.phi(inst.module("S")), madd)
