"""Free resolutions, Ext, the tensor product over a category, and Tor.

Resolutions are built from free covers on successive kernels. By default
each cover uses an irredundant generating set (greedy selection followed by
a pruning pass); over a basic category with split endomorphism rings this is
the projective cover, but nothing here depends on that: Ext and Tor are
computed as (co)homology of whatever free resolution is supplied.

Two evaluation routes are provided for Hom and tensor on free terms:
``"generic"`` computes Hom spaces by :func:`~fbcat.fincat.nat_transformations`
and tensor products by :func:`tensor_over`; ``"yoneda"`` uses the Yoneda and
co-Yoneda isomorphisms ``Hom(h_M, G) = G(M)`` and ``h_M (x) G = G(M)``.
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import exactla as la
from .fincat import (
    FinCategory,
    Rep,
    RepMorphism,
    direct_sum,
    kernel,
    nat_transformations,
    precompose_matrix,
    representable,
)

__all__ = [
    "FreeRep",
    "FreeResolution",
    "TensorSpace",
    "free_rep",
    "free_cover",
    "free_resolution",
    "resolution",
    "ext_dim",
    "ext_dims",
    "tensor_over",
    "tor_dim",
    "tor_dims",
    "mod_k_witness",
]


class FreeRep(Rep):
    """Direct sum of representables ``h_{m_1} + ... + h_{m_r}``."""

    __slots__ = ("summands", "offsets")

    def generator(self, t: int) -> np.ndarray:
        """The element of ``self(m_t)`` corresponding to the identity of summand ``t``."""
        m = self.summands[t]
        v = np.zeros(self.dims[m], dtype=np.int64)
        off = self.offsets[m][t]
        ident = self.base.ids[m]
        v[off:off + ident.size] = ident
        return v

    def block(self, q: int, s: int) -> slice:
        """Coordinates of summand ``s`` inside ``self(q)``."""
        m = self.summands[s]
        d = self.base.dim(q, m) if not self.covariant else self.base.dim(m, q)
        return slice(self.offsets[q][s], self.offsets[q][s] + d)


def free_rep(C: FinCategory, summands: Sequence[int], covariant: bool = False) -> FreeRep:
    summands = tuple(int(m) for m in summands)
    reps = [representable(C, m, covariant) for m in summands]
    total = direct_sum(reps, base=C, covariant=covariant, name="free")
    out = FreeRep.__new__(FreeRep)
    out.base, out.dims, out.action = C, total.dims, total.action
    out.covariant, out.name, out.spaces = covariant, "free", None
    out.summands = summands
    offsets = []
    for q in range(C.n):
        row, pos = [], 0
        for r in reps:
            row.append(pos)
            pos += r.dims[q]
        offsets.append(row)
    out.offsets = offsets
    return out


def _generator_images(F: Rep, gens: Sequence[tuple[int, np.ndarray]], q: int) -> np.ndarray:
    cols = []
    for m, v in gens:
        arr = F.maps_from(m, q)
        if arr.shape[0]:
            cols.append((arr @ v) % la.get_prime())
    if not cols:
        return np.zeros((F.dims[q], 0), dtype=np.int64)
    return np.concatenate(cols, axis=0).T


def _generates(F: Rep, gens) -> bool:
    for q in range(F.base.n):
        if F.dims[q] and la.rank(_generator_images(F, gens, q)) < F.dims[q]:
            return False
    return True


def _select_generators(F: Rep) -> list[tuple[int, np.ndarray]]:
    """Greedy generating set of homogeneous elements, then pruned to be irredundant."""
    n = F.base.n
    gens: list[tuple[int, np.ndarray]] = []
    span = [np.zeros((F.dims[q], 0), dtype=np.int64) for q in range(n)]
    span_rank = [0] * n
    for m in range(n):
        for k in range(F.dims[m]):
            if span_rank[m] == F.dims[m]:
                break
            v = np.zeros(F.dims[m], dtype=np.int64)
            v[k] = 1
            trial = np.hstack([span[m], v.reshape(-1, 1)])
            if la.rank(trial) == span_rank[m]:
                continue
            gens.append((m, v))
            for q in range(n):
                img = _generator_images(F, [(m, v)], q)
                if img.shape[1]:
                    span[q] = np.hstack([span[q], img])
                    span_rank[q] = la.rank(span[q])
    if len(gens) > 1:
        kept = list(gens)
        for g in list(gens):
            trial = [x for x in kept if x is not g]
            if _generates(F, trial):
                kept = trial
        gens = kept
    return gens


def free_cover(F: Rep, prune: bool = False, pad: int = 0, seed: int = 0) -> tuple[FreeRep, RepMorphism]:
    """Free rep mapping onto ``F``.

    With ``prune=False`` this is the canonical cover
    ``+_m h_m^{dim F(m)} -> F`` on a basis of each ``F(m)``. With
    ``prune=True`` an irredundant generating set is used. ``pad`` adds that
    many extra summands sent to random elements (a deliberately redundant
    cover, for testing resolution independence).
    """
    C = F.base
    if prune:
        gens = _select_generators(F)
    else:
        gens = []
        for m in range(C.n):
            for k in range(F.dims[m]):
                v = np.zeros(F.dims[m], dtype=np.int64)
                v[k] = 1
                gens.append((m, v))
    if pad:
        rng = np.random.default_rng(seed)
        for _ in range(pad):
            m = int(rng.integers(0, C.n))
            gens.append((m, rng.integers(0, la.get_prime(), F.dims[m])))
    P = free_rep(C, [m for m, _ in gens], F.covariant)
    comps = [_generator_images(F, gens, q) for q in range(C.n)]
    return P, RepMorphism(P, F, comps)


@dataclass
class FreeResolution:
    """``... -> P_1 -> P_0 -> F -> 0``; ``differentials[0]`` is the augmentation."""

    target: Rep
    terms: list[FreeRep]
    differentials: list[RepMorphism]
    kernels: list[tuple[Rep, RepMorphism]] = field(default_factory=list)
    prune: bool = True
    pad: int = 0
    seed: int = 0

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def kernel_dims(self) -> list[tuple[int, ...]]:
        return [K.dims for K, _ in self.kernels]

    def check(self) -> list[str]:
        """Re-verify the resolution invariants by ranks."""
        issues = []
        if not self.differentials[0].is_surjective():
            issues.append("augmentation is not surjective")
        for i in range(1, len(self.differentials)):
            d_in, d_out = self.differentials[i], self.differentials[i - 1]
            if not (d_out @ d_in).is_zero():
                issues.append(f"d_{i - 1} o d_{i} != 0")
            for o, (a, b) in enumerate(zip(d_in.comps, d_out.comps)):
                # exactness at P_{i-1}: rank(d_in) == dim - rank(d_out)
                if la.rank(a) != b.shape[1] - la.rank(b):
                    issues.append(f"not exact at P_{i - 1}, object {o}")
        return issues

    def extend(self, length: int) -> "FreeResolution":
        while self.length < length:
            K, inc = kernel(self.differentials[-1])
            P, pi = free_cover(K, prune=self.prune, pad=self.pad, seed=self.seed + len(self.terms))
            self.kernels.append((K, inc))
            self.terms.append(P)
            self.differentials.append(inc @ pi)
        return self


def free_resolution(F: Rep, length: int, prune: bool = True, pad: int = 0, seed: int = 0) -> FreeResolution:
    """Free resolution with terms ``P_0 .. P_length``."""
    if length < 0:
        raise ValueError("length must be >= 0")
    P, pi = free_cover(F, prune=prune, pad=pad, seed=seed)
    res = FreeResolution(F, [P], [pi], [], prune, pad, seed)
    return res.extend(length)


_RES_CACHE: "weakref.WeakKeyDictionary[Rep, FreeResolution]" = weakref.WeakKeyDictionary()
_RES_LOCK = threading.Lock()


def resolution(F: Rep, length: int) -> FreeResolution:
    """Memoised pruned resolution of ``F`` with at least ``length + 1`` terms."""
    with _RES_LOCK:
        res = _RES_CACHE.get(F)
    if res is None:
        res = free_resolution(F, length)
        with _RES_LOCK:
            res = _RES_CACHE.setdefault(F, res)
    if res.length < length:
        with _RES_LOCK:
            res.extend(length)
    return res


def mod_k_witness(F: Rep, k: int) -> tuple[bool, FreeResolution]:
    """``F`` admits a presentation ``P_k -> ... -> P_0 -> F -> 0`` by finitely generated
    projectives: always true for finite-dimensional reps; the resolution is the witness."""
    return True, resolution(F, k)


# ---------------------------------------------------------------------------
# Ext


def _yoneda_block_matrix(res: FreeResolution, j: int, G: Rep, tensor: bool) -> np.ndarray:
    """Matrix of ``Hom(d_j, G)`` (or ``d_j (x) G``) in Yoneda coordinates."""
    p = la.get_prime()
    Pj, Pprev = res.terms[j], res.terms[j - 1]
    d = res.differentials[j]
    goff = np.cumsum([0] + [G.dims[m] for m in Pj.summands])
    soff = np.cumsum([0] + [G.dims[m] for m in Pprev.summands])
    if tensor:
        out = np.zeros((soff[-1], goff[-1]), dtype=np.int64)
    else:
        out = np.zeros((goff[-1], soff[-1]), dtype=np.int64)
    for t, mt in enumerate(Pj.summands):
        c = (d.comps[mt] @ Pj.generator(t)) % p
        for s, ms in enumerate(Pprev.summands):
            coeff = c[Pprev.block(mt, s)]
            if not coeff.any():
                continue
            if tensor:
                # g in Hom(m_t, m_s); G covariant: G(g): G(m_t) -> G(m_s)
                blk = np.einsum("g,gxy->xy", coeff, G.maps_from(mt, ms))
                out[soff[s]:soff[s + 1], goff[t]:goff[t + 1]] += blk
            else:
                # g in Hom(m_t, m_s) (contra) or Hom(m_s, m_t) (cov): G(g): G(m_s) -> G(m_t)
                blk = np.einsum("g,gxy->xy", coeff, G.maps_from(ms, mt))
                out[goff[t]:goff[t + 1], soff[s]:soff[s + 1]] += blk
    return out % p


def _hom_complex(res: FreeResolution, G: Rep, method: str, upto: int):
    """Dimensions of ``Hom(P_j, G)`` and matrices ``Hom(P_{j-1},G) -> Hom(P_j,G)``."""
    dims, mats = [], [None]
    if method == "yoneda":
        for j in range(upto + 1):
            dims.append(sum(G.dims[m] for m in res.terms[j].summands))
        for j in range(1, upto + 1):
            mats.append(_yoneda_block_matrix(res, j, G, tensor=False))
    elif method == "generic":
        spaces = [nat_transformations(res.terms[j], G) for j in range(upto + 1)]
        dims = [H.dim for H in spaces]
        for j in range(1, upto + 1):
            mats.append(precompose_matrix(spaces[j - 1], res.differentials[j], spaces[j]))
    else:
        raise ValueError(f"unknown method {method!r}")
    return dims, mats


def ext_dims(F: Rep, G: Rep, max_degree: int, method: str = "yoneda",
             res: Optional[FreeResolution] = None) -> list[int]:
    """``[dim Ext^i(F, G) for i in 0..max_degree]``."""
    if F.covariant != G.covariant:
        raise ValueError("Ext needs reps of the same variance")
    if res is None:
        res = resolution(F, max_degree + 1)
    elif res.length < max_degree + 1:
        res.extend(max_degree + 1)
    dims, mats = _hom_complex(res, G, method, max_degree + 1)
    ranks = [0] + [la.rank(m) for m in mats[1:]]
    return [dims[i] - ranks[i] - ranks[i + 1] for i in range(max_degree + 1)]


def ext_dim(F: Rep, G: Rep, i: int, method: str = "yoneda", res: Optional[FreeResolution] = None) -> int:
    if i < 0:
        raise ValueError("degree must be >= 0")
    return ext_dims(F, G, i, method, res)[i]


# ---------------------------------------------------------------------------
# tensor over a category and Tor


class TensorSpace:
    """``F (x)_C G`` as a quotient of ``+_m F(m) (x) G(m)`` by the balancing relations."""

    __slots__ = ("F", "G", "offsets", "relations", "quotient", "section")

    def __init__(self, F: Rep, G: Rep):
        if F.covariant or not G.covariant:
            raise ValueError("tensor_over expects a contravariant and a covariant rep")
        if F.base is not G.base and F.base.hom_dims.shape != G.base.hom_dims.shape:
            raise ValueError("reps over different categories")
        p = la.get_prime()
        C = F.base
        self.F, self.G = F, G
        offsets = [0]
        for o in range(C.n):
            offsets.append(offsets[-1] + F.dims[o] * G.dims[o])
        self.offsets = offsets
        N = offsets[-1]
        cols = []
        for (i, j), Ff in F.action.items():
            Gf = G.action[(i, j)]
            d = Ff.shape[0]
            Fi, Fj, Gi, Gj = F.dims[i], F.dims[j], G.dims[i], G.dims[j]
            width = Fj * Gi
            if width == 0:
                continue
            blk = np.zeros((d, N, width), dtype=np.int64)
            # x in F(j), y in G(i):  F(f)x (x) y  -  x (x) G(f)y
            if Fi:
                blk[:, offsets[i]:offsets[i + 1], :] += np.einsum(
                    "axy,zw->axzyw", Ff, np.eye(Gi, dtype=np.int64)).reshape(d, Fi * Gi, width)
            if Gj:
                blk[:, offsets[j]:offsets[j + 1], :] -= np.einsum(
                    "xy,azw->axzyw", np.eye(Fj, dtype=np.int64), Gf).reshape(d, Fj * Gj, width)
            cols.append(blk.transpose(1, 0, 2).reshape(N, d * width))
        R = np.concatenate(cols, axis=1) % p if cols else np.zeros((N, 0), dtype=np.int64)
        self.relations = R
        if R.shape[1]:
            Q, free = la.left_nullspace(R)
        else:
            Q, free = np.eye(N, dtype=np.int64), np.arange(N)
        S = np.zeros((N, free.size), dtype=np.int64)
        S[free, np.arange(free.size)] = 1
        self.quotient, self.section = Q, S

    @property
    def dim(self) -> int:
        return self.quotient.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.offsets[-1]

    def project(self, vec) -> np.ndarray:
        return (self.quotient @ np.asarray(vec, dtype=np.int64)) % la.get_prime()

    def pure(self, o: int, x, y) -> np.ndarray:
        """Class of ``x (x) y`` with ``x in F(o)``, ``y in G(o)``."""
        v = np.zeros(self.ambient_dim, dtype=np.int64)
        v[self.offsets[o]:self.offsets[o + 1]] = np.outer(x, y).ravel()
        return self.project(v)

    def ambient_map(self, other: "TensorSpace", left: Optional[RepMorphism] = None,
                    right: Optional[RepMorphism] = None) -> np.ndarray:
        """Block-diagonal ``+_m left_m (x) right_m`` on the ambient sums."""
        out = np.zeros((other.ambient_dim, self.ambient_dim), dtype=np.int64)
        for o in range(len(self.offsets) - 1):
            a = left.comps[o] if left is not None else np.eye(self.F.dims[o], dtype=np.int64)
            b = right.comps[o] if right is not None else np.eye(self.G.dims[o], dtype=np.int64)
            out[other.offsets[o]:other.offsets[o + 1], self.offsets[o]:self.offsets[o + 1]] = np.kron(a, b)
        return out

    def induced(self, other: "TensorSpace", left: Optional[RepMorphism] = None,
                right: Optional[RepMorphism] = None) -> np.ndarray:
        """Matrix of ``left (x) right`` from ``self`` to ``other`` on the quotients."""
        p = la.get_prime()
        amb = self.ambient_map(other, left, right)
        return (other.quotient @ ((amb @ self.section) % p)) % p


def tensor_over(F: Rep, G: Rep) -> TensorSpace:
    return TensorSpace(F, G)


def tor_dims(F: Rep, G: Rep, max_degree: int, method: str = "yoneda",
             res: Optional[FreeResolution] = None) -> list[int]:
    """``[dim Tor_i(F, G) for i in 0..max_degree]``, resolving the contravariant ``F``."""
    if res is None:
        res = resolution(F, max_degree + 1)
    elif res.length < max_degree + 1:
        res.extend(max_degree + 1)
    upto = max_degree + 1
    if method == "yoneda":
        dims = [sum(G.dims[m] for m in res.terms[j].summands) for j in range(upto + 1)]
        mats = [None] + [_yoneda_block_matrix(res, j, G, tensor=True) for j in range(1, upto + 1)]
    elif method == "generic":
        spaces = [TensorSpace(res.terms[j], G) for j in range(upto + 1)]
        dims = [T.dim for T in spaces]
        mats = [None] + [spaces[j].induced(spaces[j - 1], left=res.differentials[j]) for j in range(1, upto + 1)]
    else:
        raise ValueError(f"unknown method {method!r}")
    ranks = [0] + [la.rank(m) for m in mats[1:]]
    return [dims[i] - ranks[i] - ranks[i + 1] for i in range(max_degree + 1)]


def tor_dim(F: Rep, G: Rep, i: int, method: str = "yoneda", res: Optional[FreeResolution] = None) -> int:
    if i < 0:
        raise ValueError("degree must be >= 0")
    return tor_dims(F, G, i, method, res)[i]
