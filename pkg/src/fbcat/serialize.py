"""JSON input and output for bound quivers, representations and instance files.

Three versioned schemas ship with the package: ``fbcat/quiver/v1``,
``fbcat/rep/v1`` and ``fbcat/input/v1``. Loading validates structurally with
``jsonschema`` and then semantically (vertex names, matrix shapes, functor
laws); every failure raises :class:`InputError` naming the offending field.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any, Optional

import jsonschema
from referencing import Registry, Resource

from . import exactla as la
from .fincat import (
    AdmissibilityError,
    FinCategory,
    QuiverSpec,
    Rep,
    build_bound_quiver_category,
    coyoneda_injective,
    rep_from_arrows,
    yoneda,
)

__all__ = [
    "InputError",
    "SCHEMA_IDS",
    "load_schema",
    "validate",
    "quiver_from_json",
    "quiver_to_json",
    "rep_from_json",
    "rep_to_json",
    "instance_from_json",
    "load_instance_file",
]

SCHEMA_IDS = {"quiver": "fbcat/quiver/v1", "rep": "fbcat/rep/v1", "input": "fbcat/input/v1"}


class InputError(ValueError):
    """Malformed input; ``field`` is a dotted path into the document."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field or '<root>'}: {message}")
        self.field = field
        self.message = message


@lru_cache(maxsize=None)
def load_schema(kind: str) -> dict:
    text = resources.files("fbcat").joinpath("schemas", f"{kind}.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry() -> Registry:
    pairs = [(load_schema(k)["$id"], Resource.from_contents(load_schema(k))) for k in SCHEMA_IDS]
    return Registry().with_resources(pairs)


def _join(prefix: str, path) -> str:
    out = prefix
    for part in path:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out = f"{out}.{part}" if out else str(part)
    return out


def validate(doc: Any, kind: str, prefix: str = "") -> None:
    """Structural validation against one of the shipped schemas."""
    validator = jsonschema.Draft202012Validator(load_schema(kind), registry=_registry())
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise InputError(_join(prefix, err.absolute_path), err.message)


def quiver_from_json(doc: dict, prefix: str = "quiver") -> QuiverSpec:
    validate(doc, "quiver", prefix)
    verts = tuple(doc["vertices"])
    arrows = []
    seen = set()
    for n, a in enumerate(doc["arrows"]):
        for end in ("source", "target"):
            if a[end] not in verts:
                raise InputError(f"{prefix}.arrows[{n}].{end}", f"unknown vertex {a[end]!r}")
        if a["name"] in seen:
            raise InputError(f"{prefix}.arrows[{n}].name", f"duplicate arrow name {a['name']!r}")
        seen.add(a["name"])
        arrows.append((a["source"], a["target"], a["name"]))
    relations = []
    for r, rel in enumerate(doc.get("relations", [])):
        for t, term in enumerate(rel):
            for s, name in enumerate(term["path"]):
                if name not in seen:
                    raise InputError(f"{prefix}.relations[{r}][{t}].path[{s}]", f"unknown arrow {name!r}")
        relations.append(tuple((int(term["coeff"]), tuple(term["path"])) for term in rel))
    bound = int(doc.get("length_bound", 2))
    return QuiverSpec(verts, tuple(arrows), tuple(relations), bound)


def quiver_to_json(spec: QuiverSpec) -> dict:
    return {
        "schema": SCHEMA_IDS["quiver"],
        "vertices": list(spec.vertices),
        "arrows": [{"name": n, "source": s, "target": t} for s, t, n in spec.arrows],
        "relations": [[{"coeff": int(c), "path": list(pth)} for c, pth in rel] for rel in spec.relations],
        "length_bound": int(spec.length_bound),
    }


def rep_from_json(C: FinCategory, doc: dict, prefix: str = "rep", name: str = "") -> Rep:
    validate(doc, "rep", prefix)
    spec = C.quiver
    if spec is None:
        raise InputError(prefix, "base category was not built from a quiver")
    dims = doc["dims"]
    if isinstance(dims, dict):
        for v in dims:
            if v not in spec.vertices:
                raise InputError(f"{prefix}.dims.{v}", f"unknown vertex {v!r}")
        dims = [int(dims.get(v, 0)) for v in spec.vertices]
    elif len(dims) != len(spec.vertices):
        raise InputError(f"{prefix}.dims", f"expected {len(spec.vertices)} entries, got {len(dims)}")
    covariant = bool(doc.get("covariant", False))
    idx = spec.arrow_index()
    mats = doc.get("arrows", {})
    for a, m in mats.items():
        if a not in idx:
            raise InputError(f"{prefix}.arrows.{a}", f"unknown arrow {a!r}")
        s, t = idx[a]
        shape = (dims[t], dims[s]) if covariant else (dims[s], dims[t])
        rows = len(m)
        cols = len(m[0]) if m else shape[1]
        if rows != shape[0] or any(len(r) != shape[1] for r in m) or (rows == 0 and shape[0] != 0):
            raise InputError(f"{prefix}.arrows.{a}", f"expected a {shape[0]}x{shape[1]} matrix, got {rows}x{cols}")
    rep = rep_from_arrows(C, dims, mats, covariant, name=doc.get("name", name))
    issues = rep.validate()
    if issues:
        raise InputError(f"{prefix}.arrows", "relations not satisfied: " + "; ".join(issues))
    return rep


def rep_to_json(rep: Rep) -> dict:
    """Arrow-matrix literal of a rep over a bound quiver category."""
    C = rep.base
    spec = C.quiver
    if spec is None or C.labels is None:
        raise ValueError("rep is not over a bound quiver category")
    arrows = {}
    for s_name, t_name, a in spec.arrows:
        s, t = C.index(s_name), C.index(t_name)
        k = C.labels[(s, t)].index((a,))
        arrows[a] = rep.action[(s, t)][k].tolist() if (s, t) in rep.action else []
    return {"schema": SCHEMA_IDS["rep"], "name": rep.name, "covariant": rep.covariant,
            "dims": list(rep.dims), "arrows": arrows}


def _simple(C: FinCategory, v: int, name: str) -> Rep:
    dims = [1 if u == v else 0 for u in range(C.n)]
    return rep_from_arrows(C, dims, {}, name=name)


def instance_from_json(doc: dict, default_name: str = "file"):
    """A :class:`~fbcat.corpus.CorpusInstance` from an ``fbcat/input/v1`` document.

    Simples ``S_v``, projectives ``P_v`` and injectives ``I_v`` are added for
    every vertex ``v``; file modules may not reuse those names.
    """
    from .corpus import CorpusInstance

    validate(doc, "input")
    spec = quiver_from_json(doc["quiver"])
    try:
        C = build_bound_quiver_category(spec)
    except AdmissibilityError as exc:
        raise InputError("quiver.length_bound", str(exc)) from None
    except ValueError as exc:
        raise InputError("quiver.relations", str(exc)) from None
    mods: dict[str, Rep] = {}
    for v, vname in enumerate(C.names):
        mods[f"S_{vname}"] = _simple(C, v, f"S_{vname}")
        mods[f"P_{vname}"] = yoneda(C, v)
        mods[f"I_{vname}"] = coyoneda_injective(C, v)
    for name, rdoc in doc.get("modules", {}).items():
        if name in mods:
            raise InputError(f"modules.{name}", "name collides with a built-in simple/projective/injective")
        rep = rep_from_json(C, rdoc, f"modules.{name}", name)
        if rep.covariant:
            raise InputError(f"modules.{name}.covariant", "instance modules must be contravariant")
        rep.name = name
        mods[name] = rep
    indec: Optional[list[str]] = doc.get("indecomposables")
    if indec is not None:
        for n, name in enumerate(indec):
            if name not in mods:
                raise InputError(f"indecomposables[{n}]", f"unknown module {name!r}")
    names = list(C.names)
    return CorpusInstance(
        name=doc.get("name", default_name),
        category=C,
        modules=mods,
        simples=[f"S_{v}" for v in names],
        projectives=[f"P_{v}" for v in names],
        injectives=[f"I_{v}" for v in names],
        indecomposables=indec,
    )


def load_instance_file(path: str):
    """Read and validate an instance file; the prime it names must match the session prime."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError("--spec", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError("--spec", f"{path} is not valid JSON (line {exc.lineno}, column {exc.colno})") from None
    if isinstance(doc, dict) and "prime" in doc and doc["prime"] != la.get_prime():
        raise InputError("prime", f"file is written over F_{doc['prime']} but the session prime is {la.get_prime()}")
    return instance_from_json(doc, default_name=path)
