"""Membership in ``gen_k(M)`` and ``cogen^k(M)``.

Two independent algorithms:

* definitional: build the universal approximation chain
  ``0 -> X -> M_0 -> ... -> M_k`` (resp. ``M_k -> ... -> M_0 -> X -> 0``)
  and check that it is exact;
* characterized: ``cogen^k`` via the unit ``alpha_X`` and vanishing of
  ``Ext^i(Psi X, Psi h_P)``, ``gen_k`` via the counit ``varphi_X`` and
  vanishing of ``Tor_i(Phi X, Psi h_P)``, for ``1 <= i < k``.

Levels follow the displayed chains: ``cogen^k`` uses the ``k + 1`` terms
``M_0 .. M_k``, so level ``k`` needs ``k + 1`` injective approximation maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import exactla as la
from .adjunction import counit_varphi, unit_alpha, _composition_pairing
from .fincat import (
    AddCategory,
    Rep,
    RepMorphism,
    _build_phi,
    _build_psi,
    cokernel,
    direct_sum,
    kernel,
    nat_transformations,
    precompose_matrix,
    postcompose_matrix,
)
from .homalg import TensorSpace, _select_generators, ext_dims, resolution, tor_dims

__all__ = [
    "MembershipVerdict",
    "ApproximationChain",
    "left_approximation",
    "right_approximation",
    "cogen_definitional",
    "gen_definitional",
    "cogen_characterized",
    "gen_characterized",
    "cogen_level",
    "cogen_characterized_level",
    "gen_characterized_level",
    "gen_level",
    "evaluation_map",
    "INDEXING",
]

INDEXING = "cogen^k: 0 -> X -> M_0 -> ... -> M_k -> Z -> 0; gen_k: 0 -> Z -> M_k -> ... -> M_0 -> X -> 0"


@dataclass
class ApproximationChain:
    """``terms[0] = X`` followed by ``M_0, M_1, ...`` and the connecting maps.

    For ``cogen`` the maps go ``X -> M_0 -> M_1 -> ...``; for ``gen`` they go
    ``... -> M_1 -> M_0 -> X`` and ``maps[j]`` has target ``terms[j]``.
    """

    kind: str
    terms: list[Rep]
    maps: list[RepMorphism]
    # stage maps: the approximation of each cokernel (cogen) / kernel (gen)
    stages: list[RepMorphism] = field(default_factory=list)

    def check(self, madd: AddCategory, k: int) -> list[str]:
        """Re-verify exactness and Hom-exactness of the first ``k + 1`` terms from scratch."""
        issues = []
        maps = self.maps[:k + 1]
        terms = self.terms[:k + 2]
        if len(maps) < k + 1:
            return [f"chain has only {len(maps)} maps, need {k + 1}"]
        if self.kind == "cogen":
            # 0 -> X -> M_0 -> ... -> M_k
            if not maps[0].is_injective():
                issues.append("X -> M_0 is not injective")
            for j in range(1, k + 1):
                issues += _exact_at(maps[j - 1], maps[j], f"M_{j - 1}")
            for i, M in enumerate(madd.objects):
                # Hom(M_k, M) -> ... -> Hom(M_0, M) -> Hom(X, M) -> 0
                H = [nat_transformations(T, M) for T in terms]
                D = [precompose_matrix(H[j + 1], maps[j], H[j]) for j in range(k + 1)]
                if la.rank(D[0]) != H[0].dim:
                    issues.append(f"Hom(M_0, {madd.names[i]}) -> Hom(X, {madd.names[i]}) not surjective")
                for j in range(1, k + 1):
                    if la.rank(D[j]) != H[j].dim - la.rank(D[j - 1]):
                        issues.append(f"Hom(-, {madd.names[i]}) not exact at M_{j - 1}")
        else:
            # M_k -> ... -> M_0 -> X -> 0
            if not maps[0].is_surjective():
                issues.append("M_0 -> X is not surjective")
            for j in range(1, k + 1):
                issues += _exact_at(maps[j], maps[j - 1], f"M_{j - 1}")
            for i, M in enumerate(madd.objects):
                H = [nat_transformations(M, T) for T in terms]
                D = [postcompose_matrix(maps[j], H[j + 1], H[j]) for j in range(k + 1)]
                if la.rank(D[0]) != H[0].dim:
                    issues.append(f"Hom({madd.names[i]}, M_0) -> Hom({madd.names[i]}, X) not surjective")
                for j in range(1, k + 1):
                    if la.rank(D[j]) != H[j].dim - la.rank(D[j - 1]):
                        issues.append(f"Hom({madd.names[i]}, -) not exact at M_{j - 1}")
        return issues

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "length": len(self.terms) - 1,
            "terms": [list(t.dims) for t in self.terms],
            "map_ranks": [m.ranks() for m in self.maps],
            "maps": [[c.tolist() for c in m.comps] for m in self.maps],
        }


def _exact_at(a: RepMorphism, b: RepMorphism, where: str) -> list[str]:
    """``A -a-> B -b-> C`` exact at ``B``, objectwise by ranks."""
    if not (b @ a).is_zero():
        return [f"maps do not compose to zero at {where}"]
    out = []
    for o, (x, y) in enumerate(zip(a.comps, b.comps)):
        if la.rank(x) != y.shape[1] - la.rank(y):
            out.append(f"not exact at {where}, object {o}")
    return out


@dataclass
class MembershipVerdict:
    member: bool
    kind: str
    method: str
    k: int
    certificate: dict
    chain: Optional[ApproximationChain] = None

    def to_json(self) -> dict:
        out = {"member": self.member, "kind": self.kind, "method": self.method, "k": self.k,
               "indexing": INDEXING, "certificate": self.certificate}
        if self.chain is not None:
            out["chain"] = self.chain.to_json()
        return out


# ---------------------------------------------------------------------------
# approximations


def _approximation_maps(X: Rep, madd: AddCategory, left: bool, minimal: bool) -> list[tuple[int, np.ndarray]]:
    """Morphisms ``X -> M_i`` (or ``M_i -> X``) as ``(i, block-per-object)`` pairs.

    ``minimal=False`` takes every basis morphism. ``minimal=True`` takes an
    irredundant generating set of ``Psi(X)`` (resp. ``Phi(X)``) as a module
    over ``add(M)``: every other morphism factors through those.
    """
    if minimal:
        G = _build_psi(madd, X) if left else _build_phi(madd, X)
        out = []
        for i, v in _select_generators(G):
            H = G.spaces[i]
            out.append((i, [np.einsum("b,bxy->xy", v, blk) % la.get_prime() for blk in H.blocks]))
        return out
    homs = [nat_transformations(X, M) if left else nat_transformations(M, X) for M in madd.objects]
    return [(i, [blk[b] for blk in H.blocks]) for i, H in enumerate(homs) for b in range(H.dim)]


def left_approximation(X: Rep, madd: AddCategory, minimal: bool = False) -> tuple[Rep, RepMorphism]:
    """Left ``add(M)``-approximation ``X -> M_0``.

    By default ``M_0 = +_i M_i^{dim Hom(X, M_i)}`` with all basis morphisms;
    ``minimal=True`` keeps only an irredundant generating set of them.
    """
    maps = _approximation_maps(X, madd, True, minimal)
    M0 = direct_sum([madd.objects[i] for i, _ in maps], base=X.base, covariant=X.covariant, name="M0")
    comps = [np.concatenate([m[o] for _, m in maps], axis=0) if maps else np.zeros((0, X.dims[o]), dtype=np.int64)
             for o in range(X.base.n)]
    return M0, RepMorphism(X, M0, comps)


def right_approximation(X: Rep, madd: AddCategory, minimal: bool = False) -> tuple[Rep, RepMorphism]:
    """Right ``add(M)``-approximation ``M_0 -> X``; dual of :func:`left_approximation`."""
    maps = _approximation_maps(X, madd, False, minimal)
    M0 = direct_sum([madd.objects[i] for i, _ in maps], base=X.base, covariant=X.covariant, name="M0")
    comps = [np.concatenate([m[o] for _, m in maps], axis=1) if maps else np.zeros((X.dims[o], 0), dtype=np.int64)
             for o in range(X.base.n)]
    return M0, RepMorphism(M0, X, comps)


def _cogen_chain(X: Rep, madd: AddCategory, k: int, minimal: bool = True) -> tuple[int, ApproximationChain]:
    """Build an approximation chain while the approximation maps stay injective.

    Any left approximation gives the same verdict: a monomorphism into
    ``add(M)`` factors through every approximation, and the cokernels of two
    approximations differ by a summand in ``add(M)``. ``minimal`` keeps the
    terms small.

    Returns ``(level, chain)`` where ``level`` is the largest ``j <= k`` with
    the first ``j + 1`` maps injective (``-1`` if ``X -> M_0`` is not).
    """
    chain = ApproximationChain("cogen", [X], [])
    cur, proj = X, None
    level = -1
    for j in range(k + 1):
        M, f = left_approximation(cur, madd, minimal)
        chain.stages.append(f)
        chain.terms.append(M)
        chain.maps.append(f if proj is None else f @ proj)
        if not f.is_injective():
            break
        level = j
        if j < k:
            cur, proj = cokernel(chain.maps[-1])
    return level, chain


def _gen_chain(X: Rep, madd: AddCategory, k: int, minimal: bool = True) -> tuple[int, ApproximationChain]:
    chain = ApproximationChain("gen", [X], [])
    cur, inc = X, None
    level = -1
    for j in range(k + 1):
        M, g = right_approximation(cur, madd, minimal)
        chain.stages.append(g)
        chain.terms.append(M)
        chain.maps.append(g if inc is None else inc @ g)
        if not g.is_surjective():
            break
        level = j
        if j < k:
            cur, inc = kernel(chain.maps[-1])
    return level, chain


def cogen_level(X: Rep, madd: AddCategory, k_max: int) -> int:
    """Largest ``k <= k_max`` with ``X in cogen^k(M)`` by the definitional chain; ``-1`` if none."""
    return _cogen_chain(X, madd, k_max)[0]


def gen_level(X: Rep, madd: AddCategory, k_max: int) -> int:
    return _gen_chain(X, madd, k_max)[0]


def cogen_definitional(X: Rep, madd: AddCategory, k: int, minimal: bool = True) -> MembershipVerdict:
    if k < 0:
        raise ValueError("k must be >= 0")
    level, chain = _cogen_chain(X, madd, k, minimal)
    member = level >= k
    cert = {"injective": [m.is_injective() for m in chain.stages], "terms": [list(t.dims) for t in chain.terms]}
    return MembershipVerdict(member, "cogen", "definitional", k, cert, chain)


def gen_definitional(X: Rep, madd: AddCategory, k: int, minimal: bool = True) -> MembershipVerdict:
    if k < 0:
        raise ValueError("k must be >= 0")
    level, chain = _gen_chain(X, madd, k, minimal)
    member = level >= k
    cert = {"surjective": [m.is_surjective() for m in chain.stages], "terms": [list(t.dims) for t in chain.terms]}
    return MembershipVerdict(member, "gen", "definitional", k, cert, chain)


# ---------------------------------------------------------------------------
# characterizations


def cogen_characterized(X: Rep, madd: AddCategory, k: int) -> MembershipVerdict:
    """``alpha_X`` invertible and ``Ext^i(Psi X, Psi h_P) = 0`` for ``1 <= i < k`` and all ``P``."""
    if k < 1:
        raise ValueError("the characterization needs k >= 1")
    alpha = unit_alpha(X, madd)
    iso = alpha.is_iso()
    ext_table: dict[str, list[int]] = {}
    vanish = True
    if iso and k > 1:
        SX = madd.psi(X)
        res = resolution(SX, k)
        for P in range(X.base.n):
            dims = ext_dims(SX, madd.psi_projective(P), k - 1, res=res)[1:]
            ext_table[X.base.names[P]] = dims
            if any(dims):
                vanish = False
                break
    cert = {"alpha_iso": iso, "alpha_ranks": alpha.ranks(), "ext": ext_table, "mod_k_witness": "automatic"}
    return MembershipVerdict(iso and vanish, "cogen", "characterized", k, cert)


def gen_characterized(X: Rep, madd: AddCategory, k: int) -> MembershipVerdict:
    """``varphi_X`` invertible and ``Tor_i(Phi X, Psi h_P) = 0`` for ``1 <= i < k`` and all ``P``."""
    if k < 1:
        raise ValueError("the characterization needs k >= 1")
    phi = counit_varphi(X, madd)
    iso = phi.is_iso()
    tor_table: dict[str, list[int]] = {}
    vanish = True
    if iso and k > 1:
        FX = madd.phi(X)
        res = resolution(FX, k)
        for P in range(X.base.n):
            dims = tor_dims(FX, madd.psi_projective(P), k - 1, res=res)[1:]
            tor_table[X.base.names[P]] = dims
            if any(dims):
                vanish = False
                break
    cert = {"varphi_iso": iso, "varphi_ranks": phi.ranks(), "tor": tor_table, "mod_k_witness": "automatic"}
    return MembershipVerdict(iso and vanish, "gen", "characterized", k, cert)


def cogen_characterized_level(X: Rep, madd: AddCategory, k_max: int) -> int:
    """Largest ``1 <= k <= k_max`` passing :func:`cogen_characterized`; ``0`` if none."""
    if not unit_alpha(X, madd).is_iso():
        return 0
    if k_max == 1:
        return 1
    SX = madd.psi(X)
    res = resolution(SX, k_max)
    first = k_max  # first nonvanishing degree, capped
    for P in range(X.base.n):
        dims = ext_dims(SX, madd.psi_projective(P), k_max - 1, res=res)
        for i in range(1, first):
            if dims[i]:
                first = i
                break
    return first


def gen_characterized_level(X: Rep, madd: AddCategory, k_max: int) -> int:
    if not counit_varphi(X, madd).is_iso():
        return 0
    if k_max == 1:
        return 1
    FX = madd.phi(X)
    res = resolution(FX, k_max)
    first = k_max
    for P in range(X.base.n):
        dims = tor_dims(FX, madd.psi_projective(P), k_max - 1, res=res)
        for i in range(1, first):
            if dims[i]:
                first = i
                break
    return first


def evaluation_map(I: Rep, P: int, madd: AddCategory) -> tuple[np.ndarray, bool]:
    """``Phi(I) (x)_M Psi(h_P) -> Hom(h_P, I) = I(P)``, ``g (x) f -> g o f``; and whether it is bijective."""
    T = TensorSpace(madd.phi(I), madd.psi_projective(P))
    amb = _composition_pairing(madd, I, P, T)
    mat = (amb @ T.section) % la.get_prime()
    iso = mat.shape[0] == mat.shape[1] and la.rank(mat) == mat.shape[0]
    return mat, iso
