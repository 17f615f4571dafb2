import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fbcat.corpus import (
    enumerate_basic_subcategories,
    get_instance,
    interval_module,
    linear_quiver,
    random_module,
    semisimple,
    truncated_polynomial,
)
from fbcat.fincat import coyoneda_injective, hom_dim, is_isomorphic, yoneda
from fbcat.homalg import ext_dims


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_truncated_polynomial_indecomposables(n):
    inst = truncated_polynomial(n)
    assert [inst.module(x).dims for x in inst.indecomposables] == [(m,) for m in range(1, n + 1)]
    assert inst.self_injective


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_linear_quiver_has_all_intervals(n):
    inst = linear_quiver(n)
    assert len(inst.indecomposables) == n * (n + 1) // 2


def test_a2_indecomposables():
    inst = linear_quiver(2)
    dims = sorted(inst.module(x).dims for x in inst.indecomposables)
    assert dims == [(0, 1), (1, 0), (1, 1)]


@pytest.mark.parametrize("n", [3, 4])
def test_interval_hom_table(n):
    """Hom([s,t], [s',t']) is one-dimensional exactly when s <= s' <= t <= t'."""
    inst = linear_quiver(n)
    ivs = [(s, t) for s in range(1, n + 1) for t in range(s, n + 1)]
    for s, t in ivs:
        for s2, t2 in ivs:
            expect = 1 if s <= s2 <= t <= t2 else 0
            assert hom_dim(inst.module(f"[{s},{t}]"), inst.module(f"[{s2},{t2}]")) == expect


@pytest.mark.parametrize("n", [3, 4])
def test_independent_intervals_match_yoneda_objects(n):
    inst = linear_quiver(n)
    C = inst.category
    for t in range(1, n + 1):
        assert is_isomorphic(interval_module(inst, 1, t), yoneda(C, t - 1))
    for s in range(1, n + 1):
        assert is_isomorphic(interval_module(inst, s, n), coyoneda_injective(C, s - 1))


def test_projectives_and_injectives_against_simples():
    for name in ["truncpoly:3", "a_n:3", "semisimple:2"]:
        inst = get_instance(name)
        for P in inst.projective_reps():
            for S in (inst.module(x) for x in inst.simples):
                assert ext_dims(P, S, 1)[1] == 0
        for E in inst.injective_reps():
            for S in (inst.module(x) for x in inst.simples):
                assert ext_dims(S, E, 1)[1] == 0


def test_truncpoly2_regular_module_is_injective():
    inst = get_instance("truncpoly:2")
    assert is_isomorphic(inst.module("P"), inst.module("I"))


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_random_module_is_deterministic_and_valid(seed, bound):
    inst = get_instance("truncpoly:2")
    a, b = random_module(inst, seed, bound), random_module(inst, seed, bound)
    assert a.dims == b.dims
    assert all(np.array_equal(a.action[k], b.action[k]) for k in a.action)
    assert a.validate() == []


def test_random_module_seed_7():
    assert random_module(get_instance("truncpoly:2"), 7, 3).validate() == []


def test_random_covariant_module():
    M = random_module(get_instance("a_n:3"), 3, covariant=True)
    assert M.covariant and M.validate() == []


@pytest.mark.parametrize("name, count", [("truncpoly:2", 3), ("truncpoly:3", 7), ("a_n:2", 7), ("a_n:3", 63)])
def test_subcategory_counts(name, count):
    assert len(enumerate_basic_subcategories(get_instance(name))) == count


def test_enumeration_refuses_unknown_indecomposables():
    inst = get_instance("truncpoly:2")
    import dataclasses

    with pytest.raises(ValueError):
        enumerate_basic_subcategories(dataclasses.replace(inst, indecomposables=None))


def test_semisimple_instance():
    inst = semisimple(2)
    assert inst.category.hom_dims.tolist() == [[1, 0], [0, 1]]


def test_get_instance_rejects_unknown():
    with pytest.raises(ValueError):
        get_instance("wild:3")
