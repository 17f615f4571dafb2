import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from fbcat import exactla as la

P_SMALL = 7


def matrices(max_rows=6, max_cols=6, p=P_SMALL):
    shapes = st.tuples(st.integers(0, max_rows), st.integers(0, max_cols))
    return shapes.flatmap(lambda s: arrays(np.int64, s, elements=st.integers(0, p - 1)))


def sympy_rank(A, p):
    if A.size == 0:
        return 0
    return DomainMatrix([[GF(p)(int(x)) for x in row] for row in A], A.shape, GF(p)).rank()


@pytest.fixture(params=la.available_backends())
def backend(request):
    old = la.BACKEND
    la.use_backend(request.param)
    yield request.param
    la.use_backend(old)


def test_backend_is_selected_at_import():
    assert la.BACKEND in la.available_backends()


def test_set_prime_rejects_composites_and_large_primes():
    with pytest.raises(ValueError):
        la.set_prime(100)
    with pytest.raises(ValueError):
        la.set_prime(16777259)  # prime, but above 2^24
    la.set_prime(16777213)  # largest prime below 2^24
    assert la.get_prime() == 16777213


def test_prime_field_restores():
    with la.prime_field(5):
        assert la.get_prime() == 5
    assert la.get_prime() == 101


def test_inverse_of_singular_raises(backend):
    with pytest.raises(np.linalg.LinAlgError):
        la.inverse([[1, 2], [2, 4]])


def test_solve_inconsistent_returns_none(backend):
    assert la.solve([[1, 0], [1, 0]], [0, 1]) is None


def test_rref_known_value(backend):
    # over F_101: [[2, 4], [1, 3]] row reduces to the identity
    R, r, piv = la.rref([[2, 4], [1, 3]])
    assert r == 2 and piv == (0, 1)
    assert np.array_equal(R, np.eye(2, dtype=np.int64))


@given(matrices())
def test_rank_matches_sympy(A):
    with la.prime_field(P_SMALL):
        for name in la.available_backends():
            la.use_backend(name)
            assert la.rank(A) == sympy_rank(A, P_SMALL)
    la.use_backend(la.available_backends()[0])


@given(matrices())
def test_nullspace_is_canonical_kernel(A):
    with la.prime_field(P_SMALL):
        N, free = la.nullspace(A)
        cols = A.shape[1]
        assert N.shape == (cols, cols - la.rank(A))
        assert not ((A @ N) % P_SMALL).any()
        assert np.array_equal(N[free], np.eye(len(free), dtype=np.int64))


@given(matrices())
def test_left_nullspace_annihilates(A):
    with la.prime_field(P_SMALL):
        Q, free = la.left_nullspace(A)
        assert not ((Q @ A) % P_SMALL).any()
        assert Q.shape[0] == A.shape[0] - la.rank(A)


@given(matrices())
def test_backends_agree_on_rref(A):
    if len(la.available_backends()) < 2:
        pytest.skip("compiled backend not built")
    with la.prime_field(P_SMALL):
        out = []
        for name in la.available_backends():
            la.use_backend(name)
            out.append(la.rref(A))
    la.use_backend(la.available_backends()[0])
    (R1, r1, p1), (R2, r2, p2) = out
    assert r1 == r2 and p1 == p2 and np.array_equal(R1, R2)


@given(matrices(5, 5), st.data())
def test_solve_round_trip(A, data):
    with la.prime_field(P_SMALL):
        x0 = data.draw(arrays(np.int64, A.shape[1], elements=st.integers(0, P_SMALL - 1)))
        b = (A @ x0) % P_SMALL
        x = la.solve(A, b)
        assert x is not None
        assert np.array_equal((A @ x) % P_SMALL, b)


@given(st.integers(1, 6), st.integers(0, 10_000))
def test_inverse_of_random_invertible(n, seed):
    rng = np.random.default_rng(seed)
    # unit lower times unit upper triangular is always invertible
    L = np.tril(rng.integers(0, 101, (n, n)), -1) + np.eye(n, dtype=np.int64)
    U = np.triu(rng.integers(0, 101, (n, n)), 1) + np.eye(n, dtype=np.int64)
    A = (L @ U) % 101
    assert np.array_equal((A @ la.inverse(A)) % 101, np.eye(n, dtype=np.int64))


def test_in_span_and_rank_helpers():
    cols = np.array([[1, 0], [0, 1], [1, 1]])
    assert la.in_span(cols, [2, 3, 5])
    assert not la.in_span(cols, [0, 0, 1])
    assert la.full_column_rank(cols)
    assert not la.full_row_rank(cols)
