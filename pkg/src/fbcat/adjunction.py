"""The restricted Hom functors and their adjoints.

For ``M = add(M_1 + ... + M_r)`` inside contravariant reps over a base
category ``C``:

* ``Psi(X) = Hom(X, -)|_M`` (covariant over ``M``) and its contravariant
  adjoint ``Psi'(Z)(P) = Hom_M(Z, Psi(h_P))``;
* ``Phi(X) = Hom(-, X)|_M`` (contravariant over ``M``) and its left adjoint
  ``Phi'(Z)(P) = Z (x)_M Psi(h_P)``.

Throughout, ``Psi(h_P)(M_i) = Hom(h_P, M_i)`` is identified with ``M_i(P)``
by evaluating at the identity of ``P`` (:meth:`AddCategory.evaluation`).
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass

import numpy as np

from . import exactla as la
from .fincat import (
    AddCategory,
    HomSpace,
    Rep,
    RepMorphism,
    element_morphism,
    flatten_tail,
    nat_transformations,
    postcompose_matrix,
    precompose_matrix,
    yoneda_morphism,
)
from .homalg import TensorSpace

__all__ = [
    "AdjunctionWitness",
    "psi_prime",
    "psi_prime_map",
    "phi_prime",
    "phi_prime_map",
    "chi_witness",
    "unit_alpha",
    "unit_alpha_prime",
    "counit_varphi",
    "triangle_check",
]

_LOCK = threading.Lock()
_PSI_PRIME: "weakref.WeakKeyDictionary[Rep, Rep]" = weakref.WeakKeyDictionary()
_PHI_PRIME: "weakref.WeakKeyDictionary[Rep, Rep]" = weakref.WeakKeyDictionary()
_EV_INV: "weakref.WeakKeyDictionary[AddCategory, dict]" = weakref.WeakKeyDictionary()


def _check_over(madd: AddCategory, Z: Rep, covariant: bool) -> None:
    if Z.base is not madd.category:
        raise ValueError("rep is not over the given add category")
    if Z.covariant != covariant:
        raise ValueError("expected a %s rep over add(M)" % ("covariant" if covariant else "contravariant"))


def _ev_inverse(madd: AddCategory, i: int, P: int) -> np.ndarray:
    with _LOCK:
        table = _EV_INV.setdefault(madd, {})
        hit = table.get((i, P))
    if hit is None:
        hit = la.inverse(madd.evaluation(i, P))
        with _LOCK:
            _EV_INV[madd][(i, P)] = hit
    return hit


def _yoneda_psi_map(madd: AddCategory, P: int, Q: int, a: int) -> RepMorphism:
    """``Psi(h_f) : Psi(h_Q) -> Psi(h_P)`` for the ``a``-th basis morphism ``f: P -> Q``."""
    C = madd.ambient
    f = np.zeros(C.dim(P, Q), dtype=np.int64)
    f[a] = 1
    return madd.psi_map(yoneda_morphism(C, P, Q, f))


# ---------------------------------------------------------------------------
# Psi'


def psi_prime(Z: Rep, madd: AddCategory) -> Rep:
    """``Psi'(Z)``: contravariant over the base, ``P -> Hom_M(Z, Psi(h_P))``."""
    _check_over(madd, Z, True)
    with _LOCK:
        hit = _PSI_PRIME.get(Z)
    if hit is not None:
        return hit
    C = madd.ambient
    spaces = tuple(nat_transformations(Z, madd.psi_projective(P)) for P in range(C.n))
    action = {}
    for P in range(C.n):
        for Q in range(C.n):
            d = C.dim(P, Q)
            if not d:
                continue
            mats = np.zeros((d, spaces[P].dim, spaces[Q].dim), dtype=np.int64)
            if spaces[P].dim and spaces[Q].dim:
                for a in range(d):
                    # theta -> Psi(h_f) o theta
                    mats[a] = postcompose_matrix(_yoneda_psi_map(madd, P, Q, a), spaces[Q], spaces[P])
            action[(P, Q)] = mats
    rep = Rep(C, [s.dim for s in spaces], action, False, f"Psi'({Z.name})", spaces)
    with _LOCK:
        return _PSI_PRIME.setdefault(Z, rep)


def psi_prime_map(w: RepMorphism, madd: AddCategory) -> RepMorphism:
    """``Psi'(w) : Psi'(Z') -> Psi'(Z)`` for ``w : Z -> Z'``, by precomposition."""
    A, B = psi_prime(w.source, madd), psi_prime(w.target, madd)
    comps = [precompose_matrix(B.spaces[P], w, A.spaces[P]) for P in range(madd.ambient.n)]
    return RepMorphism(B, A, comps)


# ---------------------------------------------------------------------------
# Phi'


def phi_prime(Z: Rep, madd: AddCategory) -> Rep:
    """``Phi'(Z)``: contravariant over the base, ``P -> Z (x)_M Psi(h_P)``."""
    _check_over(madd, Z, False)
    with _LOCK:
        hit = _PHI_PRIME.get(Z)
    if hit is not None:
        return hit
    C = madd.ambient
    spaces = tuple(TensorSpace(Z, madd.psi_projective(P)) for P in range(C.n))
    action = {}
    for P in range(C.n):
        for Q in range(C.n):
            d = C.dim(P, Q)
            if not d:
                continue
            mats = np.zeros((d, spaces[P].dim, spaces[Q].dim), dtype=np.int64)
            if spaces[P].dim and spaces[Q].dim:
                for a in range(d):
                    mats[a] = spaces[Q].induced(spaces[P], right=_yoneda_psi_map(madd, P, Q, a))
            action[(P, Q)] = mats
    rep = Rep(C, [s.dim for s in spaces], action, False, f"Phi'({Z.name})", spaces)
    with _LOCK:
        return _PHI_PRIME.setdefault(Z, rep)


def phi_prime_map(w: RepMorphism, madd: AddCategory) -> RepMorphism:
    """``Phi'(w) = w (x) id`` for ``w : Z -> Z'``."""
    A, B = phi_prime(w.source, madd), phi_prime(w.target, madd)
    comps = [A.spaces[P].induced(B.spaces[P], left=w) for P in range(madd.ambient.n)]
    return RepMorphism(A, B, comps)


# ---------------------------------------------------------------------------
# chi and chi'


@dataclass
class AdjunctionWitness:
    """``chi : Hom(X, Psi'Z) -> Hom(Z, Psi X)`` and ``chi_inv`` on the nat bases."""

    left: HomSpace
    right: HomSpace
    chi: np.ndarray
    chi_inv: np.ndarray

    def is_inverse_pair(self) -> bool:
        p = la.get_prime()
        a = (self.chi_inv @ self.chi) % p
        b = (self.chi @ self.chi_inv) % p
        return (np.array_equal(a, np.eye(self.left.dim, dtype=np.int64))
                and np.array_equal(b, np.eye(self.right.dim, dtype=np.int64)))


def _flatten_blocks(blocks: list[np.ndarray]) -> np.ndarray:
    """Concatenate per-object ``(h, rows, cols)`` blocks into ``(h, N)`` row-major vectors."""
    h = blocks[0].shape[0]
    return np.concatenate([flatten_tail(b, 1) for b in blocks], axis=1)


def _chi_vectors(madd: AddCategory, X: Rep, Z: Rep, fblocks: list[np.ndarray]) -> np.ndarray:
    """``chi`` of morphisms ``X -> Psi'Z`` given by per-object blocks; returns flattened ``Z -> Psi X``."""
    p = la.get_prime()
    C = madd.ambient
    PZ, SX = psi_prime(Z, madd), madd.psi(X)
    h = fblocks[0].shape[0]
    out = []
    for i in range(len(madd)):
        parts = []
        for P in range(C.n):
            T = PZ.spaces[P].blocks[i]  # (dim Psi'Z(P), Hom(h_P, M_i), Z(i))
            W = np.einsum("xs,bsc->bxc", madd.evaluation(i, P), T) % p
            parts.append(flatten_tail(np.einsum("bxc,hby->hcxy", W, fblocks[P]), 2) % p)
        amb = np.concatenate(parts, axis=2)  # (h, Z(i), ambient of Hom(X, M_i))
        coords = SX.spaces[i].coords(amb)  # (h, Z(i), Psi X(i))
        out.append(coords.transpose(0, 2, 1))
    return _flatten_blocks(out) % p


def _chi_inv_vectors(madd: AddCategory, X: Rep, Z: Rep, gblocks: list[np.ndarray]) -> np.ndarray:
    """``chi'`` of morphisms ``Z -> Psi X`` given by per-object blocks; returns flattened ``X -> Psi'Z``."""
    p = la.get_prime()
    C = madd.ambient
    PZ, SX = psi_prime(Z, madd), madd.psi(X)
    h = gblocks[0].shape[0]
    out = []
    for P in range(C.n):
        parts = []
        for i in range(len(madd)):
            B = SX.spaces[i].blocks[P]  # (Psi X(i), M_i(P), X(P))
            G = np.einsum("hsz,smx->hzmx", gblocks[i], B) % p
            theta = np.einsum("em,hzmx->hxez", _ev_inverse(madd, i, P), G) % p
            parts.append(flatten_tail(theta, 2))
        amb = np.concatenate(parts, axis=2)  # (h, X(P), ambient of Hom(Z, Psi h_P))
        coords = PZ.spaces[P].coords(amb)  # (h, X(P), Psi'Z(P))
        out.append(coords.transpose(0, 2, 1))
    return _flatten_blocks(out) % p


def chi_witness(X: Rep, Z: Rep, madd: AddCategory) -> AdjunctionWitness:
    """Matrices of ``chi`` and ``chi'`` between ``Hom(X, Psi'Z)`` and ``Hom(Z, Psi X)``."""
    _check_over(madd, Z, True)
    left = nat_transformations(X, psi_prime(Z, madd))
    right = nat_transformations(Z, madd.psi(X))
    if left.dim:
        chi = right.coords(_chi_vectors(madd, X, Z, left.blocks)).T
    else:
        chi = np.zeros((right.dim, 0), dtype=np.int64)
    if right.dim:
        chi_inv = left.coords(_chi_inv_vectors(madd, X, Z, right.blocks)).T
    else:
        chi_inv = np.zeros((left.dim, 0), dtype=np.int64)
    return AdjunctionWitness(left, right, np.ascontiguousarray(chi), np.ascontiguousarray(chi_inv))


def chi(u: RepMorphism, madd: AddCategory) -> RepMorphism:
    """``chi(u)`` for a single ``u : X -> Psi'(Z)``."""
    Z = _psi_prime_source(u.target, madd)
    X = u.source
    SX = madd.psi(X)
    blocks = [c[None] for c in u.comps]
    return RepMorphism.from_vector(Z, SX, _chi_vectors(madd, X, Z, blocks)[0])


def chi_inv(g: RepMorphism, madd: AddCategory, X: Rep) -> RepMorphism:
    """``chi'(g)`` for a single ``g : Z -> Psi(X)``."""
    Z = g.source
    blocks = [c[None] for c in g.comps]
    return RepMorphism.from_vector(X, psi_prime(Z, madd), _chi_inv_vectors(madd, X, Z, blocks)[0])


def _psi_prime_source(rep: Rep, madd: AddCategory) -> Rep:
    with _LOCK:
        for Z, val in _PSI_PRIME.items():
            if val is rep:
                return Z
    raise ValueError("target is not of the form Psi'(Z) built by psi_prime")


# ---------------------------------------------------------------------------
# units and counit


def unit_alpha(X: Rep, madd: AddCategory) -> RepMorphism:
    """``alpha_X : X -> Psi'Psi(X)``, ``x in X(P)`` going to ``Psi`` of ``h_P -> X``."""
    SX = madd.psi(X)
    target = psi_prime(SX, madd)
    comps = []
    for P in range(X.base.n):
        H = target.spaces[P]
        cols = np.zeros((H.dim, X.dims[P]), dtype=np.int64)
        for c in range(X.dims[P]):
            e = np.zeros(X.dims[P], dtype=np.int64)
            e[c] = 1
            u = madd.psi_map(element_morphism(X, P, e))
            cols[:, c] = H.coords(u)
        comps.append(cols)
    return RepMorphism(X, target, comps)


def unit_alpha_prime(Z: Rep, madd: AddCategory) -> RepMorphism:
    """``alpha'_Z : Z -> Psi Psi'(Z)``; at ``M_i``, ``z`` goes to ``(theta -> ev(theta_i(z)))_P``."""
    p = la.get_prime()
    PZ = psi_prime(Z, madd)
    target = madd.psi(PZ)
    comps = []
    for i in range(len(madd)):
        parts = []
        for P in range(madd.ambient.n):
            T = PZ.spaces[P].blocks[i]  # (Psi'Z(P), Hom(h_P, M_i), Z(i))
            W = np.einsum("xs,bsc->cxb", madd.evaluation(i, P), T) % p
            parts.append(flatten_tail(W, 1))
        amb = np.concatenate(parts, axis=1) if parts else np.zeros((Z.dims[i], 0), dtype=np.int64)
        comps.append(np.ascontiguousarray(target.spaces[i].coords(amb).T))
    return RepMorphism(Z, target, comps)


def counit_varphi(X: Rep, madd: AddCategory) -> RepMorphism:
    """``varphi_X : Phi'Phi(X) -> X``, ``g (x) f -> g o f`` evaluated at the identity."""
    eps = phi_prime(madd.phi(X), madd)
    comps = [_composition_pairing(madd, X, P, eps.spaces[P]) @ eps.spaces[P].section % la.get_prime()
             for P in range(X.base.n)]
    return RepMorphism(eps, X, comps)


def _composition_pairing(madd: AddCategory, X: Rep, P: int, T: TensorSpace) -> np.ndarray:
    """Ambient matrix ``+_i Hom(M_i, X) (x) Hom(h_P, M_i) -> X(P)``."""
    p = la.get_prime()
    FX = T.F
    out = np.zeros((X.dims[P], T.ambient_dim), dtype=np.int64)
    for i in range(len(madd)):
        G = FX.spaces[i].blocks[P]  # (Phi X(i), X(P), M_i(P))
        E = madd.evaluation(i, P)  # (M_i(P), Hom(h_P, M_i))
        blk = np.einsum("axm,mb->xab", G, E) % p
        out[:, T.offsets[i]:T.offsets[i + 1]] = flatten_tail(blk, 1)
    return out


def counit_kills_relations(X: Rep, madd: AddCategory) -> bool:
    """The composition pairing vanishes on every balancing relation."""
    eps = phi_prime(madd.phi(X), madd)
    for P in range(X.base.n):
        T = eps.spaces[P]
        if T.relations.shape[1] and ((_composition_pairing(madd, X, P, T) @ T.relations) % la.get_prime()).any():
            return False
    return True


def triangle_check(X: Rep, Z: Rep, madd: AddCategory) -> bool:
    """Both triangle identities of the contravariant adjunction, as exact matrix equations."""
    SX = madd.psi(X)
    lhs = madd.psi_map(unit_alpha(X, madd)) @ unit_alpha_prime(SX, madd)
    if not lhs.equals(RepMorphism.identity(SX)):
        return False
    PZ = psi_prime(Z, madd)
    rhs = psi_prime_map(unit_alpha_prime(Z, madd), madd) @ unit_alpha(PZ, madd)
    return rhs.equals(RepMorphism.identity(PZ))
