"""Exact dense linear algebra over a prime field F_p.

Matrices are plain ``numpy`` int64 arrays holding residues in ``[0, p)``.
The prime is a session-wide setting (default 101); see :func:`set_prime`.

The Gauss-Jordan kernel comes from a compiled Cython extension when it was
built, and from a vectorised numpy fallback otherwise. Set the environment
variable ``FBCAT_BACKEND=python`` to force the fallback, or switch at runtime
with :func:`use_backend`.
"""

from __future__ import annotations

import contextlib
import os
from typing import Iterator, Optional, Sequence

import numpy as np

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

__all__ = [
    "BACKEND",
    "available_backends",
    "use_backend",
    "get_prime",
    "set_prime",
    "prime_field",
    "is_prime",
    "asmat",
    "matmul",
    "rref",
    "rank",
    "nullspace",
    "kernel_basis",
    "left_nullspace",
    "solve",
    "inverse",
    "identity",
    "zeros",
]

DEFAULT_PRIME = 101
# keeps n * p**2 inside int64 for every matrix product we form
MAX_PRIME = 1 << 24

_prime = DEFAULT_PRIME
_impl = _fallback
BACKEND = "python"


def available_backends() -> list[str]:
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def use_backend(name: str) -> None:
    """Select the elimination kernel: ``"cython"`` or ``"python"``."""
    global _impl, BACKEND
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled extension fbcat.exactla._kernels is not built")
        _impl = _compiled
    elif name == "python":
        _impl = _fallback
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name


if _compiled is not None and os.environ.get("FBCAT_BACKEND", "").lower() != "python":
    use_backend("cython")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def get_prime() -> int:
    return _prime


def set_prime(p: int) -> None:
    """Set the session prime. Existing matrices are not re-reduced."""
    global _prime
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p >= MAX_PRIME:
        raise ValueError(f"prime {p} too large (must be < {MAX_PRIME})")
    _prime = p


@contextlib.contextmanager
def prime_field(p: int) -> Iterator[int]:
    old = _prime
    set_prime(p)
    try:
        yield p
    finally:
        set_prime(old)


def asmat(a, rows: Optional[int] = None, cols: Optional[int] = None) -> np.ndarray:
    """Coerce to a C-contiguous int64 matrix of residues mod p."""
    m = np.array(a, dtype=np.int64, copy=True)
    if m.ndim == 1 and rows is None:
        m = m.reshape(1, -1) if m.size else m.reshape(0, 0)
    if rows is not None and cols is not None:
        m = m.reshape(rows, cols)
    m %= _prime
    return np.ascontiguousarray(m)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a @ b) % _prime


def rref(A) -> tuple[np.ndarray, int, tuple[int, ...]]:
    """Reduced row echelon form ``(R, rank, pivots)`` of ``A`` over F_p."""
    R = np.ascontiguousarray(np.array(A, dtype=np.int64) % _prime)
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    if R.size == 0:
        return R, 0, ()
    pivots = _impl.rref_inplace(R, _prime)
    return R, len(pivots), tuple(pivots)


def rank(A) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    # eliminate along the shorter side
    if A.shape[0] > A.shape[1]:
        A = A.T
    work = np.ascontiguousarray(A % _prime, dtype=np.int64)
    return int(_impl.rank_inplace(work, _prime))


def nullspace(A) -> tuple[np.ndarray, np.ndarray]:
    """Kernel of ``A`` as columns, in canonical form.

    Returns ``(N, free)`` where ``N`` has shape ``(cols, d)`` and
    ``N[free] == I_d``; so the coordinates of a kernel vector ``v`` in this
    basis are simply ``v[free]``.
    """
    A = np.asarray(A)
    cols = A.shape[1]
    if A.shape[0] == 0 or cols == 0:
        return np.eye(cols, dtype=np.int64), np.arange(cols)
    R, r, pivots = rref(A)
    piv = np.array(pivots, dtype=np.intp)
    mask = np.ones(cols, dtype=bool)
    mask[piv] = False
    free = np.flatnonzero(mask)
    N = np.zeros((cols, free.size), dtype=np.int64)
    N[free, np.arange(free.size)] = 1
    if r and free.size:
        N[piv] = (-R[:r][:, free]) % _prime
    return N, free


def kernel_basis(A) -> list[np.ndarray]:
    N, _ = nullspace(A)
    return [N[:, k].copy() for k in range(N.shape[1])]


def left_nullspace(A) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``Q`` with ``Q @ A == 0`` spanning the left kernel; ``Q[:, free] == I``."""
    N, free = nullspace(np.asarray(A).T)
    return np.ascontiguousarray(N.T), free


def solve(A, b) -> Optional[np.ndarray]:
    """Some ``x`` with ``A @ x == b`` over F_p, or ``None`` if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if A.ndim != 2 or b.shape[0] != A.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, b has length {b.shape[0]}")
    rows, cols = A.shape
    if rows == 0:
        return np.zeros(cols, dtype=np.int64)
    R, r, pivots = rref(np.hstack([A, b.reshape(-1, 1)]))
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    if r:
        x[list(pivots)] = R[:r, cols]
    return x


def inverse(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, r, _ = rref(np.hstack([A, np.eye(n, dtype=np.int64)]))
    if r < n or not np.array_equal(R[:, :n], np.eye(n, dtype=np.int64)):
        raise np.linalg.LinAlgError("matrix is singular over F_p")
    return np.ascontiguousarray(R[:, n:])


def full_column_rank(A) -> bool:
    A = np.asarray(A)
    return A.shape[1] == 0 or rank(A) == A.shape[1]


def full_row_rank(A) -> bool:
    A = np.asarray(A)
    return A.shape[0] == 0 or rank(A) == A.shape[0]


def in_span(columns: Sequence[np.ndarray] | np.ndarray, v) -> bool:
    """Is ``v`` a combination of the given columns?"""
    M = np.asarray(columns)
    if M.size == 0:
        return not np.any(np.asarray(v) % _prime)
    return rank(M) == rank(np.hstack([M, np.asarray(v).reshape(-1, 1)]))
