"""Finite k-linear categories and their finite-dimensional representations.

A :class:`FinCategory` is given by based Hom spaces and composition
structure constants. A :class:`Rep` is a functor from it to vector spaces
over F_p, contravariant (a right module) or covariant (a left module).
The same data structure serves for the ambient category ``P`` and for
``add(M)`` built from a list of modules (see :func:`add_category`).

Conventions
-----------
``Hom(i, j)`` holds morphisms ``i -> j``. ``comp[(i, j, l)]`` has shape
``(dim Hom(j,l), dim Hom(i,j), dim Hom(i,l))``; entry ``[b, a]`` is the
coordinate vector of ``g_b o f_a``.

For a contravariant rep ``F`` and ``f in Hom(i,j)`` the action matrix
``F(f)`` maps ``F(j) -> F(i)``; for a covariant rep it maps ``G(i) -> G(j)``.
Either way :meth:`Rep.arrows` yields ``(source, target, matrices)``.
"""

from __future__ import annotations

import math
import threading
import weakref
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np

from . import exactla as la

__all__ = [
    "FinCategory",
    "Rep",
    "RepMorphism",
    "HomSpace",
    "AddCategory",
    "QuiverSpec",
    "AdmissibilityError",
    "build_bound_quiver_category",
    "validate_category",
    "yoneda",
    "coyoneda_injective",
    "yoneda_morphism",
    "element_morphism",
    "nat_transformations",
    "add_category",
    "phi",
    "psi",
    "direct_sum",
    "kernel",
    "cokernel",
    "zero_rep",
    "rep_from_arrows",
    "is_isomorphic",
    "representable",
    "hom_dim",
    "precompose_matrix",
    "postcompose_matrix",
    "sum_injections",
    "flatten_tail",
]


class AdmissibilityError(ValueError):
    """The length bound of a quiver presentation is too small."""


# ---------------------------------------------------------------------------
# categories


@dataclass(frozen=True, eq=False)
class FinCategory:
    """Presentation of a Hom-finite k-linear category on finitely many objects."""

    names: tuple[str, ...]
    hom_dims: np.ndarray
    comp: dict
    ids: tuple[np.ndarray, ...]
    labels: Optional[dict] = None
    quiver: Optional["QuiverSpec"] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.names)

    def dim(self, i: int, j: int) -> int:
        return int(self.hom_dims[i, j])

    def index(self, name) -> int:
        if isinstance(name, (int, np.integer)):
            return int(name)
        return self.names.index(str(name))

    def compose(self, i: int, j: int, l: int, g, f) -> np.ndarray:
        """Coordinates of ``g o f`` for ``f in Hom(i,j)``, ``g in Hom(j,l)``."""
        t = self.comp[(i, j, l)]
        return np.einsum("b,a,bac->c", np.asarray(g), np.asarray(f), t) % la.get_prime()

    @cached_property
    def _op(self) -> "FinCategory":
        n = self.n
        comp = {}
        for i, j, l in product(range(n), repeat=3):
            # g in Hom_op(j,l) = Hom(l,j), f in Hom_op(i,j) = Hom(j,i): g o_op f = f o g
            comp[(i, j, l)] = np.ascontiguousarray(self.comp[(l, j, i)].transpose(1, 0, 2))
        labels = None
        if self.labels is not None:
            labels = {(i, j): self.labels[(j, i)] for i in range(n) for j in range(n)}
        return FinCategory(self.names, np.ascontiguousarray(self.hom_dims.T), comp, self.ids, labels)

    def op(self) -> "FinCategory":
        return self._op

    def full_subcategory(self, indices: Sequence[int]) -> "FinCategory":
        idx = list(indices)
        comp = {
            (a, b, c): self.comp[(idx[a], idx[b], idx[c])]
            for a, b, c in product(range(len(idx)), repeat=3)
        }
        labels = None
        if self.labels is not None:
            labels = {(a, b): self.labels[(idx[a], idx[b])] for a in range(len(idx)) for b in range(len(idx))}
        return FinCategory(
            tuple(self.names[i] for i in idx),
            np.ascontiguousarray(self.hom_dims[np.ix_(idx, idx)]),
            comp,
            tuple(self.ids[i] for i in idx),
            labels,
        )

    def total_dim(self) -> int:
        return int(self.hom_dims.sum())


def validate_category(C: FinCategory) -> list[str]:
    """Associativity and identity laws on all basis triples; empty list if fine."""
    p = la.get_prime()
    issues = []
    n = C.n
    for i, j in product(range(n), repeat=2):
        t = C.comp[(i, j, j)]
        d = C.dim(i, j)
        if d == 0:
            continue
        eye = np.eye(d, dtype=np.int64)
        left = np.einsum("b,bac->ac", C.ids[j], t) % p
        if not np.array_equal(left, eye):
            issues.append(f"left identity law fails on Hom({C.names[i]},{C.names[j]})")
        right = np.einsum("a,bac->bc", C.ids[i], C.comp[(i, i, j)]) % p
        if not np.array_equal(right, eye):
            issues.append(f"right identity law fails on Hom({C.names[i]},{C.names[j]})")
    for i, j, l, m in product(range(n), repeat=4):
        if not (C.dim(i, j) and C.dim(j, l) and C.dim(l, m)):
            continue
        # h o (g o f) versus (h o g) o f
        gf = C.comp[(i, j, l)]  # (g, f, c)
        lhs = np.einsum("gfc,hcx->hgfx", gf, C.comp[(i, l, m)]) % p
        hg = C.comp[(j, l, m)]  # (h, g, e)
        rhs = np.einsum("hge,efx->hgfx", hg, C.comp[(i, j, m)]) % p
        if not np.array_equal(lhs, rhs):
            issues.append(
                f"associativity fails on {C.names[i]}->{C.names[j]}->{C.names[l]}->{C.names[m]}"
            )
    return issues


def flatten_tail(x: np.ndarray, keep: int) -> np.ndarray:
    """Merge all axes after the first ``keep`` into one (safe for empty arrays)."""
    return x.reshape(x.shape[:keep] + (math.prod(x.shape[keep:]),))


# ---------------------------------------------------------------------------
# bound quivers


@dataclass(frozen=True)
class QuiverSpec:
    """Quiver with relations.

    ``arrows`` are ``(source, target, name)``; a path is a tuple of arrow
    names in the order they are traversed; each relation is a list of
    ``(coefficient, path)`` pairs sharing source and target.
    """

    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]
    relations: tuple[tuple[tuple[int, tuple[str, ...]], ...], ...] = ()
    length_bound: int = 2

    def arrow_index(self) -> dict[str, tuple[int, int]]:
        pos = {v: k for k, v in enumerate(self.vertices)}
        return {name: (pos[s], pos[t]) for s, t, name in self.arrows}


def _paths_by_length(spec: QuiverSpec, max_len: int) -> list[list[tuple]]:
    """``out[L]`` lists ``(source, target, path)`` for every path of length L."""
    idx = spec.arrow_index()
    n = len(spec.vertices)
    out = [[(v, v, ()) for v in range(n)]]
    for _ in range(max_len):
        nxt = []
        for s, t, path in out[-1]:
            for name, (a, b) in idx.items():
                if a == t:
                    nxt.append((s, b, path + (name,)))
        out.append(nxt)
    return out


def build_bound_quiver_category(spec: QuiverSpec) -> FinCategory:
    """Path category modulo the ideal generated by the relations.

    The ideal is spanned, up to path length ``L = spec.length_bound``, by all
    ``u r w`` for relations ``r`` and paths ``u, w``. Every path of length
    ``L`` must lie in that span; otherwise :class:`AdmissibilityError`.
    Hom bases are the normal-form paths (shortest first, trivial path first).
    """
    p = la.get_prime()
    L = int(spec.length_bound)
    if L < 1:
        raise ValueError("length_bound must be >= 1")
    if len(set(spec.vertices)) != len(spec.vertices):
        raise ValueError("duplicate vertex names")
    idx = spec.arrow_index()
    if len(idx) != len(spec.arrows):
        raise ValueError("duplicate arrow names")
    n = len(spec.vertices)
    layers = _paths_by_length(spec, L)
    # columns: longest paths first, so pivots land on long paths
    cols = [q for layer in reversed(layers) for q in layer]
    col_of = {(s, path): c for c, (s, _t, path) in enumerate(cols)}

    gens = []
    for r, rel in enumerate(spec.relations):
        if not rel:
            continue
        ends = set()
        for _coeff, path in rel:
            path = tuple(path)
            if not path:
                raise ValueError(f"relation {r} contains a trivial path; relations must lie in the arrow ideal")
            for name in path:
                if name not in idx:
                    raise ValueError(f"relation {r} uses unknown arrow {name!r}")
            for a, b in zip(path, path[1:]):
                if idx[a][1] != idx[b][0]:
                    raise ValueError(f"relation {r}: path {path} is not composable")
            ends.add((idx[path[0]][0], idx[path[-1]][1]))
        if len(ends) != 1:
            raise ValueError(f"relation {r} mixes paths with different endpoints")
        (s, t), = ends
        min_len = min(len(tuple(pth)) for _, pth in rel)
        for lu in range(L - min_len + 1):
            for us, ut, u in layers[lu]:
                if ut != s:
                    continue
                for lw in range(L - min_len - lu + 1):
                    for ws, _wt, w in layers[lw]:
                        if ws != t:
                            continue
                        vec = np.zeros(len(cols), dtype=np.int64)
                        for coeff, path in rel:
                            full = u + tuple(path) + w
                            if len(full) <= L:
                                vec[col_of[(us, full)]] += coeff
                        gens.append(vec % p)
    if gens:
        R, rk, pivots = la.rref(np.array(gens))
        R = R[:rk]
    else:
        R, pivots = np.zeros((0, len(cols)), dtype=np.int64), ()
    pivot_row = {c: k for k, c in enumerate(pivots)}
    for s, _t, path in layers[L]:
        if col_of[(s, path)] not in pivot_row:
            raise AdmissibilityError(
                f"path {'*'.join(path)} of length {L} is not in the relation ideal; increase length_bound"
            )
    basis_of_pair: dict[tuple[int, int], list[int]] = {(i, j): [] for i in range(n) for j in range(n)}
    for c in sorted((c for c in range(len(cols)) if c not in pivot_row),
                    key=lambda c: (len(cols[c][2]), cols[c][2])):
        s, t, _ = cols[c]
        basis_of_pair[(s, t)].append(c)
    slot = {c: k for cs in basis_of_pair.values() for k, c in enumerate(cs)}

    def normal_form(s, t, path):
        out = np.zeros(len(basis_of_pair[(s, t)]), dtype=np.int64)
        if len(path) >= L:
            return out
        c = col_of[(s, path)]
        if c in pivot_row:
            row = R[pivot_row[c]]
            for cc in basis_of_pair[(s, t)]:
                if row[cc]:
                    out[slot[cc]] = (-row[cc]) % p
        else:
            out[slot[c]] = 1
        return out

    hom_dims = np.array([[len(basis_of_pair[(i, j)]) for j in range(n)] for i in range(n)], dtype=np.int64)
    labels = {key: [cols[c][2] for c in cs] for key, cs in basis_of_pair.items()}
    comp = {}
    for i, j, l in product(range(n), repeat=3):
        t = np.zeros((hom_dims[j, l], hom_dims[i, j], hom_dims[i, l]), dtype=np.int64)
        for a, fa in enumerate(labels[(i, j)]):
            for b, gb in enumerate(labels[(j, l)]):
                t[b, a] = normal_form(i, l, fa + gb)
        comp[(i, j, l)] = t
    ids = tuple(normal_form(v, v, ()) for v in range(n))
    return FinCategory(tuple(spec.vertices), hom_dims, comp, ids, labels, spec)


# ---------------------------------------------------------------------------
# representations


class Rep:
    """A functor ``base -> vect(F_p)``; contravariant unless ``covariant``.

    ``action[(i, j)]`` is an array of shape ``(dim Hom(i,j), rows, cols)``
    holding one matrix per basis morphism.
    """

    __slots__ = ("base", "dims", "action", "covariant", "name", "spaces", "__weakref__")

    def __init__(self, base: FinCategory, dims, action: dict, covariant: bool = False,
                 name: str = "", spaces=None):
        self.base = base
        self.dims = tuple(int(d) for d in dims)
        self.covariant = bool(covariant)
        self.name = name
        self.spaces = spaces
        if len(self.dims) != base.n:
            raise ValueError(f"expected {base.n} dimensions, got {len(self.dims)}")
        full = {}
        for i, j in product(range(base.n), repeat=2):
            d = base.dim(i, j)
            if d == 0:
                continue
            s, t = (i, j) if covariant else (j, i)
            shape = (d, self.dims[t], self.dims[s])
            arr = action.get((i, j))
            if arr is None:
                arr = np.zeros(shape, dtype=np.int64)
            else:
                arr = np.asarray(arr, dtype=np.int64).reshape(shape) % la.get_prime()
            full[(i, j)] = arr
        self.action = full

    def __repr__(self) -> str:
        kind = "cov" if self.covariant else "contra"
        label = f" {self.name}" if self.name else ""
        return f"<Rep{label} {kind} dims={self.dims}>"

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def arrows(self) -> Iterable[tuple[int, int, np.ndarray]]:
        """Yield ``(s, t, mats)`` where ``mats[a]`` maps ``V(s) -> V(t)``."""
        for (i, j), arr in self.action.items():
            if self.covariant:
                yield i, j, arr
            else:
                yield j, i, arr

    def maps_from(self, m: int, q: int) -> np.ndarray:
        """Action of the Hom space indexing the representable at ``m`` evaluated at ``q``.

        Contravariant: ``F(g)`` for ``g in Hom(q, m)``; covariant: ``G(g)`` for
        ``g in Hom(m, q)``. Shape ``(d, V(q), V(m))``.
        """
        key = (m, q) if self.covariant else (q, m)
        arr = self.action.get(key)
        if arr is None:
            return np.zeros((0, self.dims[q], self.dims[m]), dtype=np.int64)
        return arr

    def restrict(self, sub: FinCategory, indices: Sequence[int], spaces=None) -> "Rep":
        idx = list(indices)
        action = {}
        for a, b in product(range(len(idx)), repeat=2):
            arr = self.action.get((idx[a], idx[b]))
            if arr is not None:
                action[(a, b)] = arr
        rep = Rep.__new__(Rep)
        rep.base = sub
        rep.dims = tuple(self.dims[i] for i in idx)
        rep.covariant = self.covariant
        rep.name = self.name
        rep.spaces = spaces
        rep.action = action
        return rep

    def opposite(self) -> "Rep":
        """The same functor seen over ``base.op()`` with the other variance."""
        C = self.base
        action = {(i, j): self.action[(j, i)] for (j, i) in self.action}
        return Rep(C.op(), self.dims, action, not self.covariant, self.name)

    def validate(self) -> list[str]:
        """Identity and composition laws on all basis pairs."""
        p = la.get_prime()
        C = self.base
        issues = []
        for i in range(C.n):
            if C.dim(i, i) == 0:
                if self.dims[i]:
                    issues.append(f"object {C.names[i]} has no identity but nonzero space")
                continue
            ident = np.einsum("c,crs->rs", C.ids[i], self.action[(i, i)]) % p
            if not np.array_equal(ident, np.eye(self.dims[i], dtype=np.int64)):
                issues.append(f"identity at {C.names[i]} does not act as the identity")
        for i, j, l in product(range(C.n), repeat=3):
            if not (C.dim(i, j) and C.dim(j, l)):
                continue
            Fij, Fjl = self.action[(i, j)], self.action[(j, l)]
            if C.dim(i, l):
                lhs = np.einsum("bac,crs->bars", C.comp[(i, j, l)], self.action[(i, l)]) % p
            else:
                lhs = None
            if self.covariant:
                rhs = np.einsum("brs,ast->bart", Fjl, Fij) % p
            else:
                rhs = np.einsum("ars,bst->bart", Fij, Fjl) % p
            if lhs is None:
                ok = not rhs.any()
            else:
                ok = np.array_equal(lhs, rhs)
            if not ok:
                issues.append(f"composition law fails on {C.names[i]}->{C.names[j]}->{C.names[l]}")
        return issues

    def equals(self, other: "Rep") -> bool:
        if self.base is not other.base or self.dims != other.dims or self.covariant != other.covariant:
            return False
        return all(np.array_equal(a, other.action[k]) for k, a in self.action.items())


def zero_rep(C: FinCategory, covariant: bool = False) -> Rep:
    return Rep(C, [0] * C.n, {}, covariant, "0")


def rep_from_arrows(C: FinCategory, dims, arrow_mats: dict, covariant: bool = False, name: str = "") -> Rep:
    """Rep over a bound quiver category from one matrix per arrow.

    For a contravariant rep the matrix of arrow ``a: i -> j`` maps ``V(j) -> V(i)``;
    for a covariant rep it maps ``V(i) -> V(j)``. Relations are not checked
    here; call :meth:`Rep.validate`.
    """
    if C.quiver is None or C.labels is None:
        raise ValueError("category was not built from a quiver")
    spec = C.quiver
    idx = spec.arrow_index()
    if isinstance(dims, dict):
        dims = [dims[v] for v in spec.vertices]
    dims = [int(d) for d in dims]
    p = la.get_prime()
    mats = {}
    for a, (s, t) in idx.items():
        shape = (dims[t], dims[s]) if covariant else (dims[s], dims[t])
        m = arrow_mats.get(a)
        mats[a] = np.zeros(shape, dtype=np.int64) if m is None else np.asarray(m, dtype=np.int64).reshape(shape) % p
    action = {}
    for (i, j), paths in C.labels.items():
        if not paths:
            continue
        blocks = []
        for path in paths:
            m = np.eye(dims[i], dtype=np.int64)
            for a in path:
                m = (mats[a] @ m if covariant else m @ mats[a]) % p
            blocks.append(m)
        action[(i, j)] = np.array(blocks, dtype=np.int64)
    return Rep(C, dims, action, covariant, name)


# ---------------------------------------------------------------------------
# morphisms


class RepMorphism:
    """Natural transformation given by one matrix per object."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: Rep, target: Rep, comps):
        self.source = source
        self.target = target
        self.comps = tuple(
            np.asarray(c, dtype=np.int64).reshape(target.dims[o], source.dims[o]) % la.get_prime()
            for o, c in enumerate(comps)
        )

    @classmethod
    def identity(cls, rep: Rep) -> "RepMorphism":
        return cls(rep, rep, [np.eye(d, dtype=np.int64) for d in rep.dims])

    @classmethod
    def zero(cls, source: Rep, target: Rep) -> "RepMorphism":
        return cls(source, target, [np.zeros((t, s), dtype=np.int64) for s, t in zip(source.dims, target.dims)])

    @classmethod
    def from_vector(cls, source: Rep, target: Rep, vec) -> "RepMorphism":
        comps, pos = [], 0
        for s, t in zip(source.dims, target.dims):
            comps.append(vec[pos:pos + s * t].reshape(t, s))
            pos += s * t
        return cls(source, target, comps)

    def vector(self) -> np.ndarray:
        if not self.comps:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([c.ravel() for c in self.comps])

    def __matmul__(self, other: "RepMorphism") -> "RepMorphism":
        """``self o other``."""
        if other.target is not self.source and other.target.dims != self.source.dims:
            raise ValueError("morphisms are not composable")
        p = la.get_prime()
        return RepMorphism(other.source, self.target, [(a @ b) % p for a, b in zip(self.comps, other.comps)])

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(self.source, self.target, [a + b for a, b in zip(self.comps, other.comps)])

    def scale(self, c: int) -> "RepMorphism":
        return RepMorphism(self.source, self.target, [a * c for a in self.comps])

    def is_natural(self) -> bool:
        p = la.get_prime()
        src, tgt = self.source, self.target
        for s, t, A in src.arrows():
            B = tgt.action[(s, t) if src.covariant else (t, s)]
            lhs = np.einsum("xy,ayz->axz", self.comps[t], A) % p
            rhs = np.einsum("axy,yz->axz", B, self.comps[s]) % p
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_zero(self) -> bool:
        return not any(c.any() for c in self.comps)

    def ranks(self) -> list[int]:
        return [la.rank(c) for c in self.comps]

    def is_injective(self) -> bool:
        return all(la.rank(c) == c.shape[1] for c in self.comps if c.shape[1])

    def is_surjective(self) -> bool:
        return all(la.rank(c) == c.shape[0] for c in self.comps if c.shape[0])

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_injective()

    def equals(self, other: "RepMorphism") -> bool:
        return all(np.array_equal(a, b) for a, b in zip(self.comps, other.comps))


def element_morphism(F: Rep, m: int, v) -> RepMorphism:
    """The morphism from the representable at ``m`` sending the identity to ``v in F(m)``."""
    C = F.base
    h = representable(C, m, F.covariant)
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    p = la.get_prime()
    comps = []
    for q in range(C.n):
        arr = F.maps_from(m, q)
        comps.append((arr @ v).T % p if arr.shape[0] else np.zeros((F.dims[q], 0), dtype=np.int64))
    return RepMorphism(h, F, comps)


# ---------------------------------------------------------------------------
# Yoneda


_REPRESENTABLES: "weakref.WeakKeyDictionary[FinCategory, dict]" = weakref.WeakKeyDictionary()
_REP_LOCK = threading.Lock()


def representable(C: FinCategory, m: int, covariant: bool = False) -> Rep:
    """``Hom(-, m)`` (contravariant) or ``Hom(m, -)`` (covariant), cached per category."""
    with _REP_LOCK:
        table = _REPRESENTABLES.setdefault(C, {})
        rep = table.get((m, covariant))
        if rep is not None:
            return rep
    n = C.n
    action = {}
    if covariant:
        dims = [C.dim(m, q) for q in range(n)]
        for i, j in product(range(n), repeat=2):
            if C.dim(i, j):
                # f in Hom(i,j) acts Hom(m,i) -> Hom(m,j), g -> f o g
                action[(i, j)] = C.comp[(m, i, j)].transpose(0, 2, 1)
    else:
        dims = [C.dim(q, m) for q in range(n)]
        for i, j in product(range(n), repeat=2):
            if C.dim(i, j):
                # f in Hom(i,j) acts Hom(j,m) -> Hom(i,m), g -> g o f
                action[(i, j)] = C.comp[(i, j, m)].transpose(1, 2, 0)
    rep = Rep(C, dims, action, covariant, ("h^" if covariant else "h_") + C.names[m])
    with _REP_LOCK:
        return _REPRESENTABLES.setdefault(C, {}).setdefault((m, covariant), rep)


def yoneda(C: FinCategory, P) -> Rep:
    """``h_P = Hom(-, P)``, the projective contravariant rep at ``P``."""
    return representable(C, C.index(P), False)


def coyoneda_injective(C: FinCategory, P) -> Rep:
    """``E_P`` with ``E_P(Q) = Hom(P, Q)^*``; the injective contravariant rep at ``P``."""
    m = C.index(P)
    with _REP_LOCK:
        rep = _REPRESENTABLES.setdefault(C, {}).get((m, "injective"))
    if rep is not None:
        return rep
    n = C.n
    dims = [C.dim(m, q) for q in range(n)]
    action = {}
    for i, j in product(range(n), repeat=2):
        if C.dim(i, j):
            # dual of g -> f o g : Hom(m,i) -> Hom(m,j)
            action[(i, j)] = C.comp[(m, i, j)]
    rep = Rep(C, dims, action, False, "E_" + C.names[m])
    with _REP_LOCK:
        return _REPRESENTABLES.setdefault(C, {}).setdefault((m, "injective"), rep)


def yoneda_morphism(C: FinCategory, i: int, j: int, f) -> RepMorphism:
    """``h_f : h_i -> h_j`` for ``f in Hom(i,j)`` given by coordinates."""
    f = np.asarray(f, dtype=np.int64)
    p = la.get_prime()
    comps = [np.einsum("a,agc->cg", f, C.comp[(q, i, j)]) % p for q in range(C.n)]
    return RepMorphism(yoneda(C, i), yoneda(C, j), comps)


# ---------------------------------------------------------------------------
# Hom spaces


class HomSpace:
    """Basis of ``Hom(F, G)`` in canonical kernel form.

    ``basis`` has shape ``(dim, N)`` (flattened component matrices, row-major,
    object by object) and ``basis[:, free] == I``; ``blocks[o]`` reshapes the
    part belonging to object ``o`` to ``(dim, G(o), F(o))``.
    """

    __slots__ = ("source", "target", "basis", "free", "offsets", "blocks", "__weakref__")

    def __init__(self, source: Rep, target: Rep, basis: np.ndarray, free: np.ndarray):
        self.source = source
        self.target = target
        self.basis = basis
        self.free = free
        offsets = [0]
        for s, t in zip(source.dims, target.dims):
            offsets.append(offsets[-1] + s * t)
        self.offsets = offsets
        d = basis.shape[0]
        self.blocks = [
            basis[:, offsets[o]:offsets[o + 1]].reshape(d, target.dims[o], source.dims[o])
            for o in range(len(source.dims))
        ]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self) -> int:
        return self.dim

    def morphism(self, coords) -> RepMorphism:
        c = np.asarray(coords, dtype=np.int64)
        return RepMorphism.from_vector(self.source, self.target, (c @ self.basis) % la.get_prime())

    def basis_morphisms(self) -> list[RepMorphism]:
        return [RepMorphism.from_vector(self.source, self.target, row) for row in self.basis]

    def coords(self, x) -> np.ndarray:
        """Coordinates of a morphism (or flattened vectors, one per row) in this basis."""
        if isinstance(x, RepMorphism):
            x = x.vector()
        x = np.asarray(x)
        return x[..., self.free] % la.get_prime()

    def contains(self, x) -> bool:
        if isinstance(x, RepMorphism):
            x = x.vector()
        x = np.asarray(x) % la.get_prime()
        return np.array_equal((self.coords(x) @ self.basis) % la.get_prime(), x)


# F -> G -> prime -> (basis, free); only arrays are stored so keys stay collectable
_NAT_CACHE: "weakref.WeakKeyDictionary[Rep, weakref.WeakKeyDictionary]" = weakref.WeakKeyDictionary()
_NAT_LOCK = threading.Lock()


def nat_transformations(F: Rep, G: Rep) -> HomSpace:
    """Basis of all natural transformations ``F -> G`` (a kernel computation, memoised per pair)."""
    p = la.get_prime()
    with _NAT_LOCK:
        hit = _NAT_CACHE.get(F, {}).get(G, {}).get(p)
    if hit is not None:
        return HomSpace(F, G, *hit)
    basis, free = _nat_basis(F, G)
    with _NAT_LOCK:
        inner = _NAT_CACHE.setdefault(F, weakref.WeakKeyDictionary())
        inner.setdefault(G, {})[p] = (basis, free)
    return HomSpace(F, G, basis, free)


def _nat_basis(F: Rep, G: Rep) -> tuple[np.ndarray, np.ndarray]:
    if F.base is not G.base and F.base.hom_dims.shape != G.base.hom_dims.shape:
        raise ValueError("reps over different categories")
    if F.covariant != G.covariant:
        raise ValueError("reps of different variance")
    p = la.get_prime()
    offsets = [0]
    for s, t in zip(F.dims, G.dims):
        offsets.append(offsets[-1] + s * t)
    N = offsets[-1]
    rows = []
    for s, t, A in F.arrows():
        d = A.shape[0]
        if d == 0:
            continue
        B = G.action[(s, t) if F.covariant else (t, s)]
        Ft, Gt, Fs, Gs = F.dims[t], G.dims[t], F.dims[s], G.dims[s]
        if Gt * Fs == 0:
            continue
        block = np.zeros((d, Gt * Fs, N), dtype=np.int64)
        # eta_t A - B eta_s = 0, row-major vec: vec(X A) = kron(I, A^T) vec X
        if Ft:
            eye_g = np.eye(Gt, dtype=np.int64)
            block[:, :, offsets[t]:offsets[t + 1]] += np.einsum(
                "xy,azw->axzyw", eye_g, A.transpose(0, 2, 1)
            ).reshape(d, Gt * Fs, Gt * Ft)
        if Gs:
            eye_f = np.eye(Fs, dtype=np.int64)
            block[:, :, offsets[s]:offsets[s + 1]] -= np.einsum(
                "axy,zw->axzyw", B, eye_f
            ).reshape(d, Gt * Fs, Gs * Fs)
        rows.append(block.reshape(d * Gt * Fs, N))
    if rows:
        M = np.concatenate(rows) % p
        Nb, free = la.nullspace(M)
    else:
        Nb, free = np.eye(N, dtype=np.int64), np.arange(N)
    basis = np.ascontiguousarray(Nb.T)
    basis.flags.writeable = False
    return basis, free


def hom_dim(F: Rep, G: Rep) -> int:
    return nat_transformations(F, G).dim


def precompose_matrix(H_from: HomSpace, u: RepMorphism, H_to: HomSpace) -> np.ndarray:
    """Matrix of ``eta -> eta o u`` from ``H_from = Hom(B, G)`` to ``H_to = Hom(A, G)``."""
    p = la.get_prime()
    if H_from.dim == 0 or H_to.dim == 0:
        return np.zeros((H_to.dim, H_from.dim), dtype=np.int64)
    parts = []
    for o, blk in enumerate(H_from.blocks):
        parts.append(flatten_tail(np.einsum("dxy,yz->dxz", blk, u.comps[o]), 1))
    if not parts or H_from.dim == 0:
        return np.zeros((H_to.dim, H_from.dim), dtype=np.int64)
    flat = np.concatenate(parts, axis=1) % p
    return np.ascontiguousarray(H_to.coords(flat).T)


def postcompose_matrix(u: RepMorphism, H_from: HomSpace, H_to: HomSpace) -> np.ndarray:
    """Matrix of ``eta -> u o eta`` from ``Hom(F, A)`` to ``Hom(F, B)``."""
    p = la.get_prime()
    if H_from.dim == 0 or H_to.dim == 0:
        return np.zeros((H_to.dim, H_from.dim), dtype=np.int64)
    parts = []
    for o, blk in enumerate(H_from.blocks):
        parts.append(flatten_tail(np.einsum("xy,dyz->dxz", u.comps[o], blk), 1))
    if not parts or H_from.dim == 0:
        return np.zeros((H_to.dim, H_from.dim), dtype=np.int64)
    flat = np.concatenate(parts, axis=1) % p
    return np.ascontiguousarray(H_to.coords(flat).T)


# ---------------------------------------------------------------------------
# sums, kernels, cokernels


def direct_sum(reps: Sequence[Rep], base: Optional[FinCategory] = None, covariant: Optional[bool] = None,
               name: str = "") -> Rep:
    """Direct sum; the summand offsets at object ``o`` follow list order."""
    reps = list(reps)
    if not reps:
        if base is None:
            raise ValueError("empty direct sum needs an explicit base")
        return Rep(base, [0] * base.n, {}, bool(covariant), name or "0")
    C = reps[0].base
    cov = reps[0].covariant
    if len(reps) == 1:
        return reps[0]
    dims = [sum(r.dims[o] for r in reps) for o in range(C.n)]
    action = {}
    for key in reps[0].action:
        d = reps[0].action[key].shape[0]
        i, j = key
        s, t = (i, j) if cov else (j, i)
        arr = np.zeros((d, dims[t], dims[s]), dtype=np.int64)
        rt = rs = 0
        for r in reps:
            a = r.action[key]
            arr[:, rt:rt + r.dims[t], rs:rs + r.dims[s]] = a
            rt += r.dims[t]
            rs += r.dims[s]
        action[key] = arr
    return Rep(C, dims, action, cov, name or "+".join(r.name or "?" for r in reps))


def sum_injections(reps: Sequence[Rep], total: Rep) -> list[RepMorphism]:
    out = []
    off = [0] * total.base.n
    for r in reps:
        comps = []
        for o in range(total.base.n):
            m = np.zeros((total.dims[o], r.dims[o]), dtype=np.int64)
            m[off[o]:off[o] + r.dims[o], :] = np.eye(r.dims[o], dtype=np.int64)
            comps.append(m)
            off[o] += r.dims[o]
        out.append(RepMorphism(r, total, comps))
    return out


def kernel(u: RepMorphism) -> tuple[Rep, RepMorphism]:
    """Kernel subrep and its inclusion."""
    A = u.source
    p = la.get_prime()
    bases, frees = [], []
    for c in u.comps:
        if c.shape[0] == 0:
            Nb, free = np.eye(c.shape[1], dtype=np.int64), np.arange(c.shape[1])
        else:
            Nb, free = la.nullspace(c)
        bases.append(Nb)
        frees.append(free)
    dims = [b.shape[1] for b in bases]
    action = {}
    for key, arr in A.action.items():
        i, j = key
        s, t = (i, j) if A.covariant else (j, i)
        img = (arr @ bases[s]) % p
        action[key] = img[:, frees[t], :]
    K = Rep(A.base, dims, action, A.covariant, f"ker")
    return K, RepMorphism(K, A, bases)


def cokernel(u: RepMorphism) -> tuple[Rep, RepMorphism]:
    """Cokernel rep and the projection onto it."""
    B = u.target
    p = la.get_prime()
    quots, frees = [], []
    for c in u.comps:
        if c.shape[1] == 0:
            Q = np.eye(c.shape[0], dtype=np.int64)
            free = np.arange(c.shape[0])
        else:
            Q, free = la.left_nullspace(c)
        # Q[:, free] = I, so the section of the quotient selects the free coordinates
        quots.append(Q)
        frees.append(free)
    dims = [q.shape[0] for q in quots]
    action = {}
    for key, arr in B.action.items():
        i, j = key
        s, t = (i, j) if B.covariant else (j, i)
        action[key] = (quots[t] @ arr[:, :, frees[s]]) % p
    C = Rep(B.base, dims, action, B.covariant, "coker")
    return C, RepMorphism(B, C, quots)


def is_isomorphic(F: Rep, G: Rep, tries: int = 8, seed: int = 0) -> bool:
    """Randomised isomorphism test: a generic element of Hom(F,G) is invertible iff F ~ G.

    Exact when the field is large compared with the dimensions; the check is
    one-sided (``True`` is always certain).
    """
    if F.dims != G.dims:
        return False
    H = nat_transformations(F, G)
    if H.dim == 0:
        return F.total_dim == 0
    rng = np.random.default_rng(seed)
    p = la.get_prime()
    for _ in range(tries):
        if H.morphism(rng.integers(0, p, H.dim)).is_iso():
            return True
    return False


# ---------------------------------------------------------------------------
# add(M) and the restricted Hom functors


class AddCategory:
    """The category ``add(M_1 + ... + M_n)`` for reps ``M_i`` over a common base.

    ``category`` is the k-linear category with objects the ``M_i`` and Hom
    spaces the natural transformations between them. Modules over it are
    Reps over ``category``; :meth:`phi` and :meth:`psi` produce them.
    """

    def __init__(self, objects: Sequence[Rep], category: FinCategory, homs: dict,
                 parent: Optional["AddCategory"] = None, indices: Optional[Sequence[int]] = None):
        self.objects = tuple(objects)
        self.category = category
        self.homs = homs
        self.parent = parent
        self.indices = tuple(indices) if indices is not None else tuple(range(len(objects)))
        self.ambient = self.objects[0].base
        self.covariant = self.objects[0].covariant
        self._lock = threading.Lock()
        self._phi: "weakref.WeakKeyDictionary[Rep, Rep]" = weakref.WeakKeyDictionary()
        self._psi: "weakref.WeakKeyDictionary[Rep, Rep]" = weakref.WeakKeyDictionary()
        self._extra: dict = {}

    def __len__(self) -> int:
        return len(self.objects)

    @property
    def names(self) -> tuple[str, ...]:
        return self.category.names

    def restrict(self, indices: Sequence[int]) -> "AddCategory":
        """Full subcategory on the given objects; shares Hom bases with ``self``."""
        idx = list(indices)
        sub = self.category.full_subcategory(idx)
        homs = {(a, b): self.homs[(idx[a], idx[b])] for a in range(len(idx)) for b in range(len(idx))}
        return AddCategory([self.objects[i] for i in idx], sub, homs, self, idx)

    def _cached(self, table, X, build):
        with self._lock:
            hit = table.get(X)
        if hit is not None:
            return hit
        val = build()
        with self._lock:
            return table.setdefault(X, val)

    def phi(self, X: Rep) -> Rep:
        """``Phi(X) = Hom(-, X)|_M``, contravariant over ``category``."""
        if self.parent is not None:
            def build():
                full = self.parent.phi(X)
                return full.restrict(self.category, self.indices,
                                     tuple(full.spaces[i] for i in self.indices))
            return self._cached(self._phi, X, build)
        return self._cached(self._phi, X, lambda: _build_phi(self, X))

    def psi(self, X: Rep) -> Rep:
        """``Psi(X) = Hom(X, -)|_M``, covariant over ``category``."""
        if self.parent is not None:
            def build():
                full = self.parent.psi(X)
                return full.restrict(self.category, self.indices,
                                     tuple(full.spaces[i] for i in self.indices))
            return self._cached(self._psi, X, build)
        return self._cached(self._psi, X, lambda: _build_psi(self, X))

    def phi_map(self, u: RepMorphism) -> RepMorphism:
        """``Phi(u) : Phi(X) -> Phi(Y)``, postcomposition with ``u``."""
        FX, FY = self.phi(u.source), self.phi(u.target)
        comps = [postcompose_matrix(u, FX.spaces[i], FY.spaces[i]) for i in range(len(self))]
        return RepMorphism(FX, FY, comps)

    def psi_map(self, u: RepMorphism) -> RepMorphism:
        """``Psi(u) : Psi(Y) -> Psi(X)``, precomposition with ``u``."""
        GX, GY = self.psi(u.source), self.psi(u.target)
        comps = [precompose_matrix(GY.spaces[i], u, GX.spaces[i]) for i in range(len(self))]
        return RepMorphism(GY, GX, comps)

    def psi_projective(self, P: int) -> Rep:
        """``Psi(h_P)``; its value at ``M_i`` is ``Hom(h_P, M_i) ~ M_i(P)``."""
        return self.psi(yoneda(self.ambient, P)) if not self.covariant else self.psi(
            representable(self.ambient, P, True))

    def evaluation(self, i: int, P: int) -> np.ndarray:
        """Matrix of ``Hom(h_P, M_i) -> M_i(P)``, evaluation at the identity of ``P``."""
        key = ("ev", i, P)
        with self._lock:
            hit = self._extra.get(key)
        if hit is not None:
            return hit
        H = self.psi_projective(P).spaces[i]
        idP = self.ambient.ids[P]
        E = np.einsum("dxy,y->xd", H.blocks[P], idP) % la.get_prime()
        with self._lock:
            self._extra[key] = E
        return E


def _build_phi(madd: AddCategory, X: Rep) -> Rep:
    p = la.get_prime()
    D = madd.category
    spaces = tuple(nat_transformations(M, X) for M in madd.objects)
    action = {}
    for (i, j), Hij in madd.homs.items():
        if Hij.dim == 0:
            continue
        Hi, Hj = spaces[i], spaces[j]
        if Hi.dim == 0 or Hj.dim == 0:
            action[(i, j)] = np.zeros((Hij.dim, Hi.dim, Hj.dim), dtype=np.int64)
            continue
        # eta_b o f_a, per object, then coordinates in Hom(M_i, X)
        parts = [
            flatten_tail(np.einsum("bxy,ayz->abxz", Hj.blocks[o], Hij.blocks[o]), 2)
            for o in range(X.base.n)
        ]
        flat = np.concatenate(parts, axis=2) % p
        coords = flat[:, :, Hi.free]
        action[(i, j)] = coords.transpose(0, 2, 1)
    return Rep(D, [s.dim for s in spaces], action, False, f"Phi({X.name})", spaces)


def _build_psi(madd: AddCategory, X: Rep) -> Rep:
    p = la.get_prime()
    D = madd.category
    spaces = tuple(nat_transformations(X, M) for M in madd.objects)
    action = {}
    for (i, j), Hij in madd.homs.items():
        if Hij.dim == 0:
            continue
        Ki, Kj = spaces[i], spaces[j]
        if Ki.dim == 0 or Kj.dim == 0:
            action[(i, j)] = np.zeros((Hij.dim, Kj.dim, Ki.dim), dtype=np.int64)
            continue
        parts = [
            flatten_tail(np.einsum("ayz,bzx->abyx", Hij.blocks[o], Ki.blocks[o]), 2)
            for o in range(X.base.n)
        ]
        flat = np.concatenate(parts, axis=2) % p
        coords = flat[:, :, Kj.free]
        action[(i, j)] = coords.transpose(0, 2, 1)
    return Rep(D, [s.dim for s in spaces], action, True, f"Psi({X.name})", spaces)


def add_category(mods: Sequence[Rep], names: Optional[Sequence[str]] = None) -> AddCategory:
    """The category on objects ``mods`` with natural transformations as morphisms."""
    mods = list(mods)
    if not mods:
        raise ValueError("add_category needs at least one module")
    base, cov = mods[0].base, mods[0].covariant
    for m in mods:
        if m.base is not base or m.covariant != cov:
            raise ValueError("all modules must share base category and variance")
    p = la.get_prime()
    n = len(mods)
    homs = {(i, j): nat_transformations(mods[i], mods[j]) for i in range(n) for j in range(n)}
    hom_dims = np.array([[homs[(i, j)].dim for j in range(n)] for i in range(n)], dtype=np.int64)
    comp = {}
    for i, j, l in product(range(n), repeat=3):
        F, G, H = homs[(i, j)], homs[(j, l)], homs[(i, l)]
        if F.dim == 0 or G.dim == 0 or H.dim == 0:
            comp[(i, j, l)] = np.zeros((G.dim, F.dim, H.dim), dtype=np.int64)
            continue
        parts = [
            flatten_tail(np.einsum("bxy,ayz->baxz", G.blocks[o], F.blocks[o]), 2)
            for o in range(base.n)
        ]
        flat = np.concatenate(parts, axis=2) % p
        comp[(i, j, l)] = np.ascontiguousarray(flat[:, :, H.free])
    ids = tuple(homs[(i, i)].coords(RepMorphism.identity(mods[i])) for i in range(n))
    if names is None:
        names = [m.name or f"M{i}" for i, m in enumerate(mods)]
    D = FinCategory(tuple(names), hom_dims, comp, ids)
    return AddCategory(mods, D, homs)


def phi(X: Rep, madd: AddCategory) -> Rep:
    return madd.phi(X)


def psi(X: Rep, madd: AddCategory) -> Rep:
    return madd.psi(X)
