"""Command-line front end.

    tatemodels closure JOB [--window N,D] [--format table|structured]
    tatemodels check all JOB
    tatemodels run JOB            # the commands listed in the document

JOB is a path to a JSON job document or the name of a bundled example.
Exit status: 0 ok, 1 a check failed, 2 bad input, 3 window too small,
4 internal invariant violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from functools import cached_property
from importlib import resources
from pathlib import Path

import jsonschema

from . import cache as cachemod
from .classify import check_cor_ci, check_cor_qci, classify, deviations, is_weakly_closed, poincare_check
from .compare import LiftFailure, NotWeaklyClosed, PreimageMismatch, comparison_from_closure, theorem_A_check, verify_chain_map, verify_quasi_iso
from .dga import NotACycle, ParityMismatch, Window, WindowOverflow
from .pi import check_abelian, check_antisymmetry, check_d2_squared, check_dimensions, check_jacobi, check_square_compat, check_theorem_abelian, homotopy_lie_algebra
from .resolve import ACYCLIC_CLOSURE, WindowTooSmall, acyclic_closure, betti_numbers, check_acyclic, minimal_model
from .ring import MapPresentation, PresentationError, QuotientRing, RingPresentation

COMMANDS = ("closure", "model", "compare", "pi", "deviations", "classify", "betti", "poincare", "check all")
EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_WINDOW, EXIT_INVARIANT = range(5)

_TERM = {
    "type": "array",
    "prefixItems": [{"type": "integer"}, {"type": "array", "items": {"type": "integer", "minimum": 0}}],
    "minItems": 2,
    "maxItems": 2,
}
_POLY = {"type": "array", "items": _TERM}
SCHEMA = {
    "type": "object",
    "required": ["p", "generators", "relations", "kernel"],
    "properties": {
        "description": {"type": "string"},
        "p": {"type": "integer", "minimum": 2},
        "generators": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "array",
                "prefixItems": [{"type": "string", "minLength": 1}, {"type": "integer", "minimum": 1}],
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "relations": {"type": "array", "items": _POLY},
        "kernel": {"type": "array", "items": _POLY},
        "window": {"type": "array", "prefixItems": [{"type": "integer", "minimum": 1}] * 2, "minItems": 2, "maxItems": 2},
        "commands": {"type": "array", "items": {"enum": list(COMMANDS)}},
        "format": {"enum": ["table", "structured"]},
    },
    "additionalProperties": False,
}


class InputError(ValueError):
    pass


def corpus_names() -> list[str]:
    root = resources.files("tatemodels") / "corpus"
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".json"))


def load_job(ref: str) -> dict:
    path = Path(ref)
    if path.exists():
        text = path.read_text()
    elif ref in corpus_names():
        text = (resources.files("tatemodels") / "corpus" / f"{ref}.json").read_text()
    else:
        raise InputError(f"no job document or bundled example named {ref!r}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"job document is not JSON: {exc.msg} (line {exc.lineno})") from None
    validate(doc)
    return doc


def validate(doc: dict) -> None:
    try:
        jsonschema.Draft202012Validator(SCHEMA).validate(doc)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "document"
        raise InputError(f"{where}: {exc.message}") from None
    n = len(doc["generators"])
    for section in ("relations", "kernel"):
        for i, f in enumerate(doc[section]):
            if any(len(e) != n for _, e in f):
                raise InputError(f"{section}/{i}: exponent vectors need {n} entries")


def _permutation(text: str | None, n: int, what: str):
    if text is None:
        return list(range(n))
    try:
        perm = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"{what} order must be a comma-separated permutation") from None
    if sorted(perm) != list(range(n)):
        raise InputError(f"{what} order must be a permutation of 0..{n - 1}")
    return perm


def _poly(terms) -> dict:
    f: dict = {}
    for c, e in terms:
        f[tuple(e)] = f.get(tuple(e), 0) + c
    return f


class Session:
    """Lazily built objects for one job document."""

    def __init__(self, doc: dict, window: Window, seed_order=None, relation_order=None):
        self.doc = doc
        self.window = window
        rels = [doc["relations"][i] for i in _permutation(relation_order, len(doc["relations"]), "relation")]
        kern = [doc["kernel"][i] for i in _permutation(seed_order, len(doc["kernel"]), "seed")]
        gens = tuple((g, w) for g, w in doc["generators"])
        self.presentation = RingPresentation(doc["p"], gens, tuple(tuple((c, tuple(e)) for c, e in r) for r in rels))
        self.kernel_terms = kern
        self._use_ring(QuotientRing(self.presentation))
        self._loaded: dict = {}

    def _use_ring(self, ring):
        self.ring = ring
        self.phi = MapPresentation(ring, [_poly(f) for f in self.kernel_terms])

    def load(self, path):
        got = cachemod.load_cache(path, expect_ring=self.presentation)
        self._use_ring(got.build.extension.base)
        if got.gamma is not None:
            self._loaded["comparison"] = (got.build, got.gamma)
            self._loaded["closure"] = got.closure
        elif got.build.flavor == ACYCLIC_CLOSURE:
            self._loaded["closure"] = got.build
        else:
            self._loaded["model"] = got.build

    @cached_property
    def closure(self):
        return self._loaded.get("closure") or acyclic_closure(self.phi, self.window)

    @cached_property
    def model(self):
        return self._loaded.get("model") or minimal_model(self.phi, self.window)

    @cached_property
    def weakly_closed(self):
        return is_weakly_closed(self.closure)

    @cached_property
    def comparison(self):
        if "comparison" in self._loaded:
            return self._loaded["comparison"]
        return comparison_from_closure(self.closure)

    def save(self, command, path):
        if command == "model":
            cachemod.save_cache(path, self.model)
        elif command == "compare":
            build, gamma = self.comparison
            cachemod.save_cache(path, build, gamma, self.closure)
        else:
            cachemod.save_cache(path, self.closure)


# -- commands -----------------------------------------------------------------


def _win(build):
    return {"N": build.window.N, "D": build.window.D, "certified_D": build.certified_D}


def _variables(build, label):
    ext = build.extension
    rows = [
        {
            "kind": label,
            "name": v.name,
            "type": v.kind,
            "bidegree": [v.hdeg, v.ideg],
            "boundary": ext.format(v.boundary),
            "window": _win(build),
        }
        for v in ext.ordered()
    ]
    rows.append({"kind": f"{label}_counts", "counts": build.variable_counts(), "window": _win(build)})
    return rows, True


def cmd_closure(s: Session):
    return _variables(s.closure, "closure_variable")


def cmd_model(s: Session):
    return _variables(s.model, "model_variable")


def _require_weakly_closed(s: Session):
    wc = s.weakly_closed
    if not wc.value:
        raise NotWeaklyClosed(f"closure is not weakly closed: {wc.witness}")


def cmd_compare(s: Session):
    _require_weakly_closed(s)
    build, gamma = s.comparison
    w = _win(build)
    chain = verify_chain_map(gamma)
    qiso = verify_quasi_iso(gamma, build.certified_D)
    thm = theorem_A_check(gamma)
    recs = [
        {"kind": "comparison_image", "variable": v.name, "bidegree": [v.hdeg, v.ideg], "image": gamma.target.format(gamma.assignment[v.id]), "window": w}
        for v in build.extension.ordered()
    ]
    recs.append({"kind": "chain_map", "ok": chain["ok"], "first_failure": chain["first_failure"], "checked": chain["checked"], "window": w})
    recs.append({"kind": "quasi_isomorphism", "ok": qiso["ok"], "failures": qiso["failures"], "window": qiso["window"]})
    for row in thm["degrees"]:
        recs.append({"kind": "indecomposables", **row, "window": w})
    ok = chain["ok"] and qiso["ok"] and thm["ok"]
    return recs, ok


def cmd_pi(s: Session):
    _require_weakly_closed(s)
    build, gamma = s.comparison
    ext = build.extension
    L = homotopy_lie_algebra(ext)
    w = _win(build)
    exp = L.export()
    recs = [{"kind": "pi_basis", **b, "window": w} for b in exp["basis"]]
    recs += [{"kind": "pi_bracket", "left": a, "right": b, "target": t, "coefficient": c, "window": w} for a, b, t, c in exp["brackets"]]
    recs += [{"kind": "pi_square", "element": a, "target": t, "coefficient": c, "window": w} for a, t, c in exp["squares"]]
    checks = {
        "abelian": check_abelian(L)["abelian"],
        "antisymmetry": check_antisymmetry(L)["ok"],
        "jacobi": check_jacobi(L)["ok"],
        "square_bracket": check_square_compat(L)["ok"],
        "d2_squared": check_d2_squared(ext)["ok"],
        "dimensions": check_dimensions(L, build.variable_counts())["ok"],
    }
    thm = check_theorem_abelian(gamma, L)
    recs.append({"kind": "pi_checks", **checks, "window": w})
    recs.append({"kind": "pi_structure", "ok": thm["ok"], "clauses": thm["clauses"], "notes": thm["notes"], "window": thm["window"]})
    if not (checks["antisymmetry"] and checks["jacobi"] and checks["d2_squared"]):
        raise InvariantViolation("homotopy Lie algebra structure constants violate an axiom")
    ok = all(checks[k] for k in ("square_bracket", "dimensions")) and thm["ok"]
    if classify(s.closure).closed.value:
        ok = ok and checks["abelian"]
    return recs, ok


def _deviation_table(s: Session):
    build, _ = s.comparison if s.weakly_closed.value else (s.model, None)
    return deviations(build, s.closure)


def cmd_deviations(s: Session):
    t = _deviation_table(s)
    w = _win(s.closure)
    recs = [
        {"kind": "deviation", "i": i, "eps": t.eps[i], "gamma": t.gamma[i], "eps_predicted": t.eps_predicted[i], "window": w}
        for i in range(2, t.certified_through + 1)
    ]
    ok = t.agree() if s.weakly_closed.value else True
    recs.append({"kind": "deviation_summary", "agree": t.agree(), "mismatches": t.mismatches(), "weakly_closed": s.weakly_closed.value, "window": w})
    return recs, ok


def cmd_classify(s: Session):
    rep = classify(s.closure)
    recs = []
    for name in ("closed", "weakly_closed", "ci", "qci"):
        v = getattr(rep, name)
        recs.append({"kind": "predicate", "name": name, "value": v.value, "witness": v.witness, "window": v.window})
    if not rep.consistent():
        raise InvariantViolation("classification is inconsistent")
    return recs, True


def cmd_betti(s: Session):
    recs = []
    for label, b in (("closure", s.closure), ("model", s.model)):
        recs.append({"kind": "ranks", "build": label, "ranks": betti_numbers(b), "window": _win(b)})
    return recs, True


def cmd_poincare(s: Session):
    recs = []
    ok = True
    for b in (s.closure, s.model):
        r = poincare_check(b)
        ok = ok and r["ok"]
        recs.append({"kind": "poincare", "flavor": r["flavor"], "ok": r["ok"], "enumerated": r["enumerated"], "product": r["product"], "window": r["window"]})
    return recs, ok


def cmd_check_all(s: Session):
    recs = []
    ok = True
    acyc = check_acyclic(s.closure)
    if not acyc["ok"]:
        raise InvariantViolation(f"closure is not acyclic: {acyc['failures'][:1]}")
    suites = []
    if s.weakly_closed.value:
        build, gamma = s.comparison
        thm = theorem_A_check(gamma)
        suites.append(("theorem_A_check", thm["ok"]))
        suites.append(("check_theorem_abelian", check_theorem_abelian(gamma)["ok"]))
        table = deviations(build, s.closure)
        suites.append(("check_cor_ci", check_cor_ci(s.closure, table)["agree"]))
        suites.append(("check_cor_qci", check_cor_qci(s.closure, table)["agree"]))
        suites.append(("deviation_formula", table.agree()))
    else:
        for name in ("theorem_A_check", "check_theorem_abelian", "check_cor_ci", "check_cor_qci", "deviation_formula"):
            suites.append((name, None))
    pc = all(poincare_check(b)["ok"] for b in (s.closure, s.model))
    suites.append(("poincare_check", pc))
    for name, res in suites:
        status = "skipped" if res is None else ("pass" if res else "fail")
        recs.append({"kind": "suite", "name": name, "status": status, "window": _win(s.closure)})
        ok = ok and res is not False
    return recs, ok


class InvariantViolation(RuntimeError):
    pass


HANDLERS = {
    "closure": cmd_closure,
    "model": cmd_model,
    "compare": cmd_compare,
    "pi": cmd_pi,
    "deviations": cmd_deviations,
    "classify": cmd_classify,
    "betti": cmd_betti,
    "poincare": cmd_poincare,
    "check all": cmd_check_all,
}


# -- output -------------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    return json.dumps(v, sort_keys=True, separators=(",", ":"))


def render_table(records: list[dict]) -> str:
    out = []
    groups: dict = {}
    for r in records:
        groups.setdefault(r["kind"], []).append(r)
    for kind, rows in groups.items():
        cols = [k for k in rows[0] if k not in ("kind", "window")]
        for r in rows[1:]:
            cols += [k for k in r if k not in cols and k not in ("kind", "window")]
        cells = [[_cell(r.get(c, "")) for c in cols] for r in rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        out.append(f"[{kind}]  window {_cell(rows[0].get('window'))}")
        out.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
        out.extend("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in cells)
        out.append("")
    return "\n".join(out)


def render_structured(command: str, records: list[dict], ok: bool) -> str:
    enc = lambda o: json.dumps(o, sort_keys=True, separators=(",", ":"))  # noqa: E731
    lines = [enc({"format": "tatemodels-report", "version": 1, "command": command})]
    lines += [enc(r) for r in records]
    lines.append(enc({"kind": "status", "ok": ok}))
    return "\n".join(lines)


# -- entry point --------------------------------------------------------------


def _parse_window(text):
    try:
        n, d = (int(t) for t in text.split(","))
        return Window(n, d)
    except ValueError:
        raise InputError("--window expects N,D with positive integers") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tatemodels", description="Acyclic closures, minimal models and the comparison between them.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("job", help="job document path or bundled example name")
        sp.add_argument("--window", help="N,D (overrides the document)")
        sp.add_argument("--seed-order", help="permutation of kernel generators, e.g. 1,0")
        sp.add_argument("--relation-order", help="permutation of ring relations")
        sp.add_argument("--format", choices=["table", "structured"])
        sp.add_argument("--save-cache", metavar="PATH")
        sp.add_argument("--load-cache", metavar="PATH")

    for name in COMMANDS[:-1]:
        common(sub.add_parser(name))
    chk = sub.add_parser("check")
    chk.add_argument("suite", choices=["all"])
    common(chk)
    common(sub.add_parser("run", help="run the commands listed in the document"))
    sub.add_parser("examples", help="list bundled examples")
    return ap


def run(command: str, doc: dict, args) -> tuple[int, str]:
    w = _parse_window(args.window) if args.window else Window(*doc.get("window", [6, 12]))
    fmt = args.format or doc.get("format", "table")
    s = Session(doc, w, args.seed_order, args.relation_order)
    if args.load_cache:
        s.load(args.load_cache)
    commands = doc.get("commands", ["check all"]) if command == "run" else [command]
    texts = []
    ok_all = True
    for c in commands:
        recs, ok = HANDLERS[c](s)
        ok_all = ok_all and ok
        texts.append(render_structured(c, recs, ok) if fmt == "structured" else f"== {c} ==\n" + render_table(recs) + ("ok" if ok else "FAILED"))
    if args.save_cache:
        s.save(commands[-1], args.save_cache)
    return (EXIT_OK if ok_all else EXIT_FAIL), "\n".join(texts)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "examples":
        print("\n".join(corpus_names()))
        return EXIT_OK
    command = "check all" if args.command == "check" else args.command
    try:
        doc = load_job(args.job)
        code, text = run(command, doc, args)
    except (InputError, PresentationError, cachemod.CacheError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except WindowTooSmall as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WINDOW
    except NotWeaklyClosed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InvariantViolation, LiftFailure, NotACycle, ParityMismatch, WindowOverflow, PreimageMismatch) as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
