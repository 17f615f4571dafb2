"""Built-in example categories, their indecomposable modules, and random modules.

Instances are addressed by name: ``truncpoly:n`` (``k[x]/(x^n)``), ``a_n:n``
(the linear quiver ``1 -> 2 -> ... -> n``) and ``semisimple:n`` (``k^n``).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import exactla as la
from .fincat import (
    AddCategory,
    FinCategory,
    QuiverSpec,
    Rep,
    RepMorphism,
    add_category,
    build_bound_quiver_category,
    cokernel,
    coyoneda_injective,
    is_isomorphic,
    rep_from_arrows,
    yoneda,
)
from .homalg import _generator_images, free_rep

__all__ = [
    "CorpusInstance",
    "truncated_polynomial",
    "linear_quiver",
    "semisimple",
    "random_module",
    "enumerate_basic_subcategories",
    "get_instance",
    "INSTANCE_KINDS",
]


@dataclass
class CorpusInstance:
    """A base category with named modules.

    ``indecomposables`` lists module names when the full list is known in
    closed form; ``simples``, ``projectives`` and ``injectives`` are indexed
    by object.
    """

    name: str
    category: FinCategory
    modules: dict[str, Rep]
    simples: list[str]
    projectives: list[str]
    injectives: list[str]
    indecomposables: Optional[list[str]] = None
    self_injective: bool = False
    _full_add: Optional[AddCategory] = field(default=None, repr=False)

    def module(self, name: str) -> Rep:
        try:
            return self.modules[name]
        except KeyError:
            raise KeyError(f"instance {self.name} has no module {name!r}; known: {', '.join(self.modules)}") from None

    def projective_reps(self) -> list[Rep]:
        return [self.modules[n] for n in self.projectives]

    def injective_reps(self) -> list[Rep]:
        return [self.modules[n] for n in self.injectives]

    def indecomposable_reps(self) -> list[Rep]:
        if self.indecomposables is None:
            raise ValueError(f"instance {self.name} has no closed-form list of indecomposables")
        return [self.modules[n] for n in self.indecomposables]

    def full_add(self) -> AddCategory:
        """``add`` of all indecomposables; every basic subcategory restricts from it."""
        if self._full_add is None:
            names = self.indecomposables
            if names is None:
                raise ValueError(f"instance {self.name} has no closed-form list of indecomposables")
            self._full_add = add_category([self.modules[n] for n in names], names)
        return self._full_add

    def add_of(self, names: Sequence[str]) -> AddCategory:
        """``add`` of the named modules, restricted from :meth:`full_add` when possible."""
        names = basic_names(self, names)
        if self.indecomposables is not None and all(n in self.indecomposables for n in names):
            idx = sorted(self.indecomposables.index(n) for n in names)
            return self.full_add().restrict(idx)
        return add_category([self.modules[n] for n in names], names)

    def regular(self) -> list[str]:
        return basic_names(self, self.projectives)

    def generator_cogenerator(self) -> list[str]:
        return basic_names(self, self.projectives + self.injectives)


def basic_names(inst: CorpusInstance, names: Sequence[str]) -> list[str]:
    """Drop repeated names and modules isomorphic to an earlier one."""
    out: list[str] = []
    for n in names:
        rep = inst.module(n)
        canon = _canonical_name(inst, n)
        if canon in out:
            continue
        if any(inst.modules[m].dims == rep.dims and is_isomorphic(inst.modules[m], rep) for m in out):
            continue
        out.append(canon)
    return out


def _canonical_name(inst: CorpusInstance, name: str) -> str:
    """The indecomposable-list name of the same object, if it is listed."""
    rep = inst.module(name)
    if inst.indecomposables is not None and name not in inst.indecomposables:
        for m in inst.indecomposables:
            if inst.modules[m] is rep:
                return m
    return name


def _shift(m: int) -> np.ndarray:
    """Nilpotent Jordan block of size ``m``."""
    return np.eye(m, k=-1, dtype=np.int64)


def truncated_polynomial(n: int) -> CorpusInstance:
    """``k[x]/(x^n)`` with its uniserial modules ``U1, ..., Un`` (``Un`` is the regular module)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    spec = QuiverSpec(("v",), (("v", "v", "x"),), (((1, ("x",) * n),),), n)
    C = build_bound_quiver_category(spec)
    mods: dict[str, Rep] = {}
    for m in range(1, n):
        mods[f"U{m}"] = rep_from_arrows(C, [m], {"x": _shift(m)}, name=f"U{m}")
    mods[f"U{n}"] = yoneda(C, 0)
    mods["S"] = mods["U1"]
    mods["P"] = mods[f"U{n}"]
    mods["I"] = coyoneda_injective(C, 0)
    return CorpusInstance(
        name=f"truncpoly:{n}",
        category=C,
        modules=mods,
        simples=["S"],
        projectives=["P"],
        injectives=["I"],
        indecomposables=[f"U{m}" for m in range(1, n + 1)],
        self_injective=True,
    )


def _interval(C: FinCategory, n: int, s: int, t: int) -> Rep:
    dims = [1 if s <= v <= t else 0 for v in range(1, n + 1)]
    mats = {}
    for v in range(1, n):
        if s <= v and v + 1 <= t:
            mats[f"a{v}"] = [[1]]
    return rep_from_arrows(C, dims, mats, name=f"[{s},{t}]")


def linear_quiver(n: int) -> CorpusInstance:
    """``A_n`` with arrows ``i -> i+1`` and its ``n(n+1)/2`` interval modules ``[s,t]``.

    For contravariant reps the projective at ``i`` is ``[1,i]`` and the
    injective is ``[i,n]``; those intervals are stored as the Yoneda and
    co-Yoneda objects themselves.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    verts = tuple(str(v) for v in range(1, n + 1))
    arrows = tuple((str(v), str(v + 1), f"a{v}") for v in range(1, n))
    C = build_bound_quiver_category(QuiverSpec(verts, arrows, (), n))
    mods: dict[str, Rep] = {}
    names = []
    for s in range(1, n + 1):
        for t in range(s, n + 1):
            key = f"[{s},{t}]"
            names.append(key)
            if s == 1:
                mods[key] = yoneda(C, t - 1)
            elif t == n:
                mods[key] = coyoneda_injective(C, s - 1)
            else:
                mods[key] = _interval(C, n, s, t)
    for v in range(1, n + 1):
        mods[f"S{v}"] = mods[f"[{v},{v}]"]
        mods[f"P{v}"] = mods[f"[1,{v}]"]
        mods[f"I{v}"] = mods[f"[{v},{n}]"]
    return CorpusInstance(
        name=f"a_n:{n}",
        category=C,
        modules=mods,
        simples=[f"S{v}" for v in range(1, n + 1)],
        projectives=[f"P{v}" for v in range(1, n + 1)],
        injectives=[f"I{v}" for v in range(1, n + 1)],
        indecomposables=names,
        self_injective=(n == 1),
    )


def interval_module(inst: CorpusInstance, s: int, t: int) -> Rep:
    """An interval module over ``A_n`` built from arrow matrices (never the Yoneda object)."""
    n = inst.category.n
    return _interval(inst.category, n, s, t)


def semisimple(n: int) -> CorpusInstance:
    """``k x ... x k`` (``n`` factors): ``n`` objects and only identities."""
    if n < 1:
        raise ValueError("n must be >= 1")
    verts = tuple(str(v) for v in range(1, n + 1))
    C = build_bound_quiver_category(QuiverSpec(verts, (), (), 1))
    mods: dict[str, Rep] = {}
    for v in range(1, n + 1):
        P = yoneda(C, v - 1)
        mods[f"S{v}"] = P
        mods[f"P{v}"] = P
        mods[f"I{v}"] = P
    return CorpusInstance(
        name=f"semisimple:{n}",
        category=C,
        modules=mods,
        simples=[f"S{v}" for v in range(1, n + 1)],
        projectives=[f"P{v}" for v in range(1, n + 1)],
        injectives=[f"I{v}" for v in range(1, n + 1)],
        indecomposables=[f"S{v}" for v in range(1, n + 1)],
        self_injective=True,
    )


INSTANCE_KINDS = {
    "truncpoly": truncated_polynomial,
    "truncated_polynomial": truncated_polynomial,
    "a_n": linear_quiver,
    "linear_quiver": linear_quiver,
    "semisimple": semisimple,
}

_INSTANCES: dict[tuple[str, int, int], CorpusInstance] = {}


def get_instance(name: str) -> CorpusInstance:
    """Look up (and memoise per prime) an instance such as ``"truncpoly:3"`` or ``"a_n:2"``."""
    m = re.fullmatch(r"\s*([a-z_]+)\s*:\s*(\d+)\s*", name)
    if m is None or m.group(1) not in INSTANCE_KINDS:
        raise ValueError(f"unknown corpus instance {name!r}; expected one of "
                         f"{', '.join(sorted(INSTANCE_KINDS))} followed by ':n'")
    build = INSTANCE_KINDS[m.group(1)]
    n = int(m.group(2))
    key = (build.__name__, n, la.get_prime())
    if key not in _INSTANCES:
        _INSTANCES[key] = build(n)
    return _INSTANCES[key]


def random_module(target: Union[CorpusInstance, FinCategory], seed: int, size_bound: int = 3,
                  covariant: bool = False) -> Rep:
    """Cokernel of a seeded random morphism between free reps.

    The free source and target each have between 1 and ``size_bound``
    representable summands (the source may also be empty).
    """
    if size_bound < 1:
        raise ValueError("size_bound must be >= 1")
    C = target.category if isinstance(target, CorpusInstance) else target
    rng = np.random.default_rng(seed)
    p = la.get_prime()
    gens = [int(x) for x in rng.integers(0, C.n, int(rng.integers(1, size_bound + 1)))]
    rels = [int(x) for x in rng.integers(0, C.n, int(rng.integers(0, size_bound + 1)))]
    P0 = free_rep(C, gens, covariant)
    P1 = free_rep(C, rels, covariant)
    images = [(m, rng.integers(0, p, P0.dims[m])) for m in rels]
    comps = [_generator_images(P0, images, q) for q in range(C.n)]
    M, _ = cokernel(RepMorphism(P1, P0, comps))
    M.name = f"rand{seed}"
    return M


def enumerate_basic_subcategories(inst: CorpusInstance) -> list[tuple[tuple[str, ...], AddCategory]]:
    """Every nonempty set of listed indecomposables, as restrictions of the full ``add``."""
    if inst.indecomposables is None:
        raise ValueError(f"instance {inst.name} has no closed-form indecomposables; refusing to enumerate")
    full = inst.full_add()
    names = inst.indecomposables
    out = []
    for r in range(1, len(names) + 1):
        for idx in itertools.combinations(range(len(names)), r):
            out.append((tuple(names[i] for i in idx), full.restrict(idx)))
    return out
