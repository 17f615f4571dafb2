"""Command-line front end.

``fbcat check CMD`` runs one computation or verifier on a corpus instance (or
an instance file) and prints a JSON report; ``fbcat sweep`` classifies every
basic subcategory of an instance. Exit codes: 0 verified or member, 1
falsified or non-member, 2 input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Optional, Sequence

from . import exactla as la
from .corpus import CorpusInstance, basic_names, get_instance, random_module
from .fincat import AddCategory, Rep, add_category, hom_dim
from .gencogen import (
    INDEXING,
    cogen_characterized,
    cogen_definitional,
    gen_characterized,
    gen_definitional,
)
from .homalg import ext_dims, tor_dims
from .serialize import InputError, instance_from_json
from .theorems import (
    REPORT_SCHEMA,
    faithfully_balanced,
    sweep_subcategories,
    verify_cogen1_duality,
    verify_extyon,
    verify_iso_on_ext,
    verify_nice_special_case,
    verify_symmetry,
)

__all__ = ["main", "build_parser", "RunConfig", "resolve_modules", "CHECKS"]

CHECKS = ("hom", "ext", "tor", "gen", "cogen", "fb", "duality", "symmetry", "extyon", "isoext")
DEFAULT_PRIME = 101
RANDOM_SAMPLES = 20

SELECTOR_HELP = (
    "comma-separated module names or keywords: regular, projective, injective, simple, "
    "full (all listed indecomposables), gencogen (projectives and injectives), rand:N (random module with seed N)"
)


@dataclasses.dataclass
class RunConfig:
    command: str
    check: Optional[str]
    prime: int
    k: int
    k_max: int
    seed: int
    corpus: Optional[str]
    spec: Optional[str]
    module: Optional[str]
    target: Optional[str]
    out: Optional[str]

    def to_json(self) -> dict:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 2 with the usage line, as argparse does, but never raise SystemExit(1)
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=None, help=f"field size p (default {DEFAULT_PRIME})")
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    src = common.add_mutually_exclusive_group()
    src.add_argument("--corpus", help="built-in instance, e.g. truncpoly:3, a_n:2, semisimple:2")
    src.add_argument("--spec", help="instance file in the fbcat/input/v1 schema")
    common.add_argument("--out", help="write the JSON report here instead of stdout")

    parser = _Parser(prog="fbcat", description="Membership, faithful balance and symmetry checks over F_p.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", parents=[common], help="run one check")
    check.add_argument("check", choices=CHECKS)
    check.add_argument("--module", help="the subcategory M (or first arguments for hom/ext); " + SELECTOR_HELP)
    check.add_argument("--target", help="objects to test (or second arguments for hom/ext); same syntax")
    check.add_argument("--k", type=int, default=1, help="level k >= 1 (default 1)")
    check.add_argument("--k-max", type=int, default=None, help=argparse.SUPPRESS)

    sweep = sub.add_parser("sweep", parents=[common], help="classify all basic subcategories")
    sweep.add_argument("--k-max", type=int, default=3, help="largest level to classify (default 3)")
    sweep.add_argument("--k", type=int, default=None, help=argparse.SUPPRESS)
    sweep.add_argument("--module", help=argparse.SUPPRESS)
    sweep.add_argument("--target", help=argparse.SUPPRESS)
    return parser


# ---------------------------------------------------------------------------
# inputs


def _load_instance(cfg: RunConfig, doc: Optional[dict]) -> CorpusInstance:
    if cfg.corpus is not None:
        try:
            return get_instance(cfg.corpus)
        except ValueError as exc:
            raise InputError("--corpus", str(exc)) from None
    if doc is not None:
        return instance_from_json(doc, default_name=cfg.spec)
    raise InputError("--corpus", "one of --corpus or --spec is required")


def _read_spec(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError("--spec", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError("--spec", f"{path} is not valid JSON (line {exc.lineno}, column {exc.colno})") from None
    if not isinstance(doc, dict):
        raise InputError("<root>", "instance file must be a JSON object")
    return doc


def _tokens(selector: str, flag: str) -> list[str]:
    """Split on commas outside brackets, so interval names like ``[1,2]`` stay whole."""
    parts, depth, cur = [], 0, ""
    for ch in selector:
        depth += (ch == "[") - (ch == "]")
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    parts.append(cur.strip())
    if depth != 0 or any(not t for t in parts):
        raise InputError(flag, f"malformed module list {selector!r}")
    return parts


def resolve_modules(inst: CorpusInstance, selector: Optional[str], flag: str) -> list[str]:
    """Expand a selector into module names, registering ``rand:N`` modules on ``inst``."""
    if selector is None or not selector.strip():
        raise InputError(flag, "no modules selected")
    out: list[str] = []
    for tok in _tokens(selector, flag):
        if tok in ("regular", "projective"):
            out += inst.projectives
        elif tok == "injective":
            out += inst.injectives
        elif tok == "simple":
            out += inst.simples
        elif tok == "gencogen":
            out += inst.projectives + inst.injectives
        elif tok == "full":
            if inst.indecomposables is None:
                raise InputError(flag, f"instance {inst.name} has no list of indecomposables")
            out += inst.indecomposables
        elif tok.startswith("rand:"):
            try:
                s = int(tok[5:])
            except ValueError:
                raise InputError(flag, f"bad random seed in {tok!r}") from None
            if tok not in inst.modules:
                inst.modules[tok] = random_module(inst, s)
                inst.modules[tok].name = tok
            out.append(tok)
        elif tok in inst.modules:
            out.append(tok)
        else:
            raise InputError(flag, f"unknown module {tok!r}; known: {', '.join(inst.modules)}")
    seen: list[str] = []
    for n in out:
        if n not in seen:
            seen.append(n)
    return seen


def _subcategory(inst: CorpusInstance, names: list[str]) -> tuple[list[str], AddCategory]:
    names = basic_names(inst, names)
    nonzero = [n for n in names if inst.module(n).total_dim]
    if not nonzero:
        raise InputError("--module", "the subcategory must contain a nonzero module")
    if all(n in inst.modules for n in nonzero) and not any(n.startswith("rand:") for n in nonzero):
        return nonzero, inst.add_of(nonzero)
    return nonzero, add_category([inst.module(n) for n in nonzero], nonzero)


def _samples(inst: CorpusInstance, cfg: RunConfig) -> list[Rep]:
    """``--target`` if given, else the listed indecomposables plus seeded random modules."""
    if cfg.target is not None:
        return [inst.module(n) for n in resolve_modules(inst, cfg.target, "--target")]
    if inst.indecomposables is not None:
        base = list(inst.indecomposables)
    else:
        base = basic_names(inst, inst.simples + inst.projectives + inst.injectives)
    rand = resolve_modules(inst, ",".join(f"rand:{cfg.seed + j}" for j in range(RANDOM_SAMPLES)), "--target")
    return [inst.module(n) for n in base + rand]


# ---------------------------------------------------------------------------
# checks


def _check(cfg: RunConfig, inst: CorpusInstance) -> tuple[int, dict]:
    c = cfg.check
    if c in ("hom", "ext"):
        left = resolve_modules(inst, cfg.module, "--module")
        right = resolve_modules(inst, cfg.target, "--target")
        rows = []
        for a in left:
            for b in right:
                X, Y = inst.module(a), inst.module(b)
                if c == "hom":
                    rows.append({"source": a, "target": b, "dim": hom_dim(X, Y)})
                else:
                    rows.append({"source": a, "target": b, "dims": ext_dims(X, Y, cfg.k)})
        return 0, {"status": "verified", "table": rows}

    names, madd = _subcategory(inst, resolve_modules(inst, cfg.module, "--module"))
    if c == "tor":
        objs = resolve_modules(inst, cfg.target, "--target")
        rows = []
        for a in objs:
            for b in objs:
                rows.append({"phi": a, "psi": b,
                             "dims": tor_dims(madd.phi(inst.module(a)), madd.psi(inst.module(b)), cfg.k)})
        return 0, {"status": "verified", "M": names, "table": rows}

    if c in ("gen", "cogen"):
        defn, char = (gen_definitional, gen_characterized) if c == "gen" else (cogen_definitional, cogen_characterized)
        rows, member, agree = [], True, True
        for a in resolve_modules(inst, cfg.target, "--target"):
            X = inst.module(a)
            d = defn(X, madd, cfg.k)
            ch = char(X, madd, cfg.k)
            if d.member and d.chain is not None:
                issues = d.chain.check(madd, cfg.k)
                if issues:
                    raise RuntimeError(f"certificate for {a} failed re-check: {issues}")
            rows.append({"object": a, "member": d.member, "definitional": d.to_json(),
                         "characterized": ch.to_json(), "backends_agree": d.member == ch.member})
            member &= d.member
            agree &= d.member == ch.member
        status = "member" if member and agree else ("disagreement" if not agree else "non-member")
        return (0 if member and agree else 1), {"status": status, "M": names, "indexing": INDEXING, "results": rows}

    if c == "fb":
        rep = faithfully_balanced(madd)
        return (0 if rep.ok and rep.verdict else 1), rep.to_json()
    if c == "symmetry":
        rep = verify_symmetry(madd, cfg.k)
        nice = verify_nice_special_case(madd, cfg.k)
        out = rep.to_json()
        out["nice_special_case"] = nice.to_json()
        ok = rep.ok and nice.ok and rep.verdict == nice.verdict
        return (0 if ok else 1), out
    samples = _samples(inst, cfg)
    if c == "duality":
        rep = verify_cogen1_duality(madd, samples, cfg.k)
    elif c == "extyon":
        rep = verify_extyon(madd, [(Z, C) for Z in samples for C in samples])
    else:
        rep = verify_iso_on_ext(madd, cfg.k, samples)
    return (0 if rep.ok else 1), rep.to_json()


def _run(cfg: RunConfig, doc: Optional[dict]) -> tuple[int, dict]:
    if cfg.command == "check" and cfg.k < 1:
        raise InputError("--k", f"k must be >= 1, got {cfg.k}")
    if cfg.command == "sweep" and cfg.k_max < 1:
        raise InputError("--k-max", f"k_max must be >= 1, got {cfg.k_max}")
    inst = _load_instance(cfg, doc)
    # rand:N registrations stay local to this run
    inst = dataclasses.replace(inst, modules=dict(inst.modules))
    if cfg.command == "sweep":
        if inst.indecomposables is None:
            raise InputError("indecomposables" if cfg.spec else "--corpus",
                             f"instance {inst.name} has no list of indecomposables to sweep")
        table = sweep_subcategories(inst, cfg.k_max)
        return (0 if table["status"] == "verified" else 1), table
    return _check(cfg, inst)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(command=args.command, check=getattr(args, "check", None), prime=args.prime or 0,
                    k=args.k if args.k is not None else 1, k_max=args.k_max if args.k_max is not None else 3,
                    seed=args.seed, corpus=args.corpus, spec=args.spec, module=args.module,
                    target=args.target, out=args.out)
    code: int
    try:
        doc = _read_spec(cfg.spec) if cfg.spec else None
        prime = cfg.prime or (doc.get("prime") if doc else None) or DEFAULT_PRIME
        if doc is not None and "prime" in doc and doc["prime"] != prime:
            raise InputError("prime", f"file is written over F_{doc['prime']} but --prime is {prime}")
        try:
            la.set_prime(prime)
        except ValueError as exc:
            raise InputError("--prime", str(exc)) from None
        cfg.prime = prime
        code, body = _run(cfg, doc)
    except InputError as exc:
        code, body = 2, {"status": "input-error", "field": exc.field, "error": exc.message}
        print(f"fbcat: input error: {exc}", file=sys.stderr)
    report = {"schema": REPORT_SCHEMA, "command": cfg.command, "config": cfg.to_json(), "exit_code": code}
    report.update(body)
    text = json.dumps(report, indent=2, sort_keys=False, default=_default)
    if cfg.out:
        try:
            with open(cfg.out, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            print(f"fbcat: input error: --out: cannot write {cfg.out}: {exc.strerror}", file=sys.stderr)
            return 2
    else:
        print(text)
    return code


def _default(obj):
    import numpy as np

    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


if __name__ == "__main__":
    sys.exit(main())
