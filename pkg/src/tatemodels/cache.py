"""Line-delimited JSON persistence for builds and comparison maps.

Layout: a header line, one line for the presentation, one line per
variable, and for comparison maps the closure registry plus one line per
assignment. Monomials are stored as [[vid, exp], ...] with ring exponent
vectors alongside.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .dga import SemifreeExtension, Window
from .ring import MapPresentation, QuotientRing, RingPresentation, poly_to_terms
from .resolve import ResolutionBuild

FORMAT = "tatemodels-cache"
VERSION = 1


class CacheError(ValueError):
    pass


def ring_hash(pres: RingPresentation) -> str:
    doc = {"p": pres.p, "generators": [list(g) for g in pres.generators], "relations": [[[c, list(e)] for c, e in r] for r in pres.relations]}
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()


def element_terms(u: dict) -> list:
    return sorted([[[list(t) for t in m], list(r), c] for (m, r), c in u.items()])


def terms_element(terms) -> dict:
    return {(tuple((int(v), int(e)) for v, e in m), tuple(int(x) for x in r)): int(c) for m, r, c in terms}


def _registry(ext: SemifreeExtension) -> list:
    return [
        {"id": v.id, "name": v.name, "kind": v.kind, "hdeg": v.hdeg, "ideg": v.ideg, "boundary": element_terms(v.boundary)}
        for v in ext.variables
    ]


def _restore(ext: SemifreeExtension, rows):
    for i, row in enumerate(rows):
        if row["id"] != i:
            raise CacheError(f"variable ids out of sequence at {i}")
        ext.adjoin(row["kind"], terms_element(row["boundary"]), name=row["name"], hdeg=row["hdeg"], ideg=row["ideg"], check=False)


def _head(build: ResolutionBuild, role: str) -> dict:
    pres = build.map.source.presentation
    return {
        "role": role,
        "ring_hash": ring_hash(pres),
        "p": pres.p,
        "generators": [list(g) for g in pres.generators],
        "relations": [[[c, list(e)] for c, e in r] for r in pres.relations],
        "kernel": [[[c, list(e)] for c, e in poly_to_terms(f)] for f in build.map.kernel_generators],
        "flavor": build.flavor,
        "window": [build.window.N, build.window.D],
        "variables": len(build.extension.variables),
    }


def dump_lines(build: ResolutionBuild, gamma=None, closure: ResolutionBuild | None = None) -> list[str]:
    enc = lambda o: json.dumps(o, sort_keys=True, separators=(",", ":"))  # noqa: E731
    lines = [enc({"format": FORMAT, "version": VERSION, "comparison": gamma is not None})]
    parts = [("build", build)]
    if gamma is not None:
        if closure is None:
            raise ValueError("a comparison cache needs the closure build")
        parts.append(("closure", closure))
    for role, b in parts:
        lines.append(enc(_head(b, role)))
        lines.extend(enc(row) for row in _registry(b.extension))
    if gamma is not None:
        for vid in sorted(gamma.assignment):
            fam = gamma.families.get(vid)
            lines.append(enc({"assign": vid, "image": element_terms(gamma.assignment[vid]), "family": list(fam) if fam else None}))
        for yid in sorted(gamma.lifts):
            lines.append(enc({"lift": yid, "element": element_terms(gamma.lifts[yid])}))
    return lines


def save_cache(path, build: ResolutionBuild, gamma=None, closure=None) -> None:
    Path(path).write_text("\n".join(dump_lines(build, gamma, closure)) + "\n")


@dataclass
class CacheContents:
    build: ResolutionBuild
    closure: ResolutionBuild | None = None
    gamma: object = None


def _parse(text: str) -> list[dict]:
    out = []
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            out.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise CacheError(f"line {n}: {exc.msg}") from None
    return out


def _rebuild(head: dict, rows: list[dict], ring: QuotientRing | None) -> ResolutionBuild:
    gens = tuple((str(n), int(w)) for n, w in head["generators"])
    rels = tuple(tuple((int(c), tuple(e)) for c, e in r) for r in head["relations"])
    pres = RingPresentation(int(head["p"]), gens, rels)
    if ring_hash(pres) != head["ring_hash"]:
        raise CacheError("ring presentation hash mismatch")
    R = ring if ring is not None else QuotientRing(pres)
    kernel = [{tuple(e): int(c) for c, e in f} for f in head["kernel"]]
    phi = MapPresentation(R, kernel)
    window = Window(*head["window"])
    ext = SemifreeExtension(R, window)
    _restore(ext, rows)
    return ResolutionBuild(ext, phi, head["flavor"], window, [(v.id, v.boundary) for v in ext.variables])


def load_cache(path, expect_ring: RingPresentation | None = None) -> CacheContents:
    from .compare import ComparisonMap

    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CacheError(str(exc)) from None
    recs = _parse(text)
    if not recs or recs[0].get("format") != FORMAT:
        raise CacheError("not a cache file")
    if recs[0].get("version") != VERSION:
        raise CacheError(f"unsupported cache version {recs[0].get('version')}")
    pos = 1
    built = {}
    ring = None
    try:
        while pos < len(recs) and "role" in recs[pos]:
            head = recs[pos]
            n = head["variables"]
            rows = recs[pos + 1 : pos + 1 + n]
            if len(rows) != n:
                raise CacheError("cache is truncated")
            if expect_ring is not None and head["ring_hash"] != ring_hash(expect_ring):
                raise CacheError("cache was written for a different ring")
            b = _rebuild(head, rows, ring)
            ring = b.extension.base
            built[head["role"]] = b
            pos += 1 + n
    except (KeyError, TypeError, IndexError) as exc:
        raise CacheError(f"malformed cache record: {exc}") from None
    if "build" not in built:
        raise CacheError("cache has no build section")
    out = CacheContents(built["build"], built.get("closure"))
    if recs[0].get("comparison"):
        if out.closure is None:
            raise CacheError("comparison cache without closure section")
        gamma = ComparisonMap(out.build.extension, out.closure.extension)
        for rec in recs[pos:]:
            if "assign" in rec:
                gamma.extend(rec["assign"], terms_element(rec["image"]))
                if rec["family"]:
                    gamma.register(rec["assign"], *rec["family"])
            elif "lift" in rec:
                gamma.lifts[rec["lift"]] = terms_element(rec["element"])
        if len(gamma.assignment) != len(out.build.extension.variables):
            raise CacheError("cache is truncated")
        out.gamma = gamma
    return out
