"""Homology in a bidegree window and the two inductive constructions.

Both the acyclic closure and the minimal model kill a minimal generating
set of H_n degree by degree; they differ only in the kind of even
variable adjoined (divided powers versus polynomial).
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .dga import DIVIDED, EXTERIOR, POLYNOMIAL, SemifreeExtension, Window
from .ring import MapPresentation, minimalize_kernel

log = logging.getLogger(__name__)

ACYCLIC_CLOSURE = "acyclic_closure"
MINIMAL_MODEL = "minimal_model"


class WindowTooSmall(RuntimeError):
    pass


@dataclass
class ResolutionBuild:
    extension: SemifreeExtension
    map: MapPresentation
    flavor: str
    window: Window
    adjunction_log: list = field(default_factory=list)

    @property
    def guard(self) -> int:
        return self.map.guard_band()

    @property
    def certified_D(self) -> int:
        return self.window.D - self.guard

    def variable_counts(self) -> list[int]:
        """Number of variables in each homological degree 0..N."""
        c = [0] * (self.window.N + 1)
        for v in self.extension.variables:
            if v.hdeg <= self.window.N:
                c[v.hdeg] += 1
        return c

    def bidegree_counts(self) -> dict:
        return dict(sorted(Counter((v.hdeg, v.ideg) for v in self.extension.variables).items()))


# -- homology -------------------------------------------------------------


def cycles(ext: SemifreeExtension, h: int, e: int) -> np.ndarray:
    if h == 0:
        return np.eye(ext.dim(0, e), dtype=np.int64)
    return linalg.nullspace(ext.d_matrix(h, e), ext.p)


def boundaries(ext: SemifreeExtension, h: int, e: int) -> np.ndarray:
    M = ext.d_matrix(h + 1, e)
    if M.shape[1] == 0:
        return np.zeros((0, ext.dim(h, e)), dtype=np.int64)
    return linalg.column_space(M, ext.p)


def homology_dim(ext: SemifreeExtension, h: int, e: int) -> int:
    p = ext.p
    z = ext.dim(h, e) - (linalg.rank(ext.d_matrix(h, e), p) if h >= 1 else 0)
    return z - linalg.rank(ext.d_matrix(h + 1, e), p)


def homology_basis(ext: SemifreeExtension, h: int, emax=None) -> dict:
    """Representatives of Z_h / B_h for each internal degree e <= emax."""
    emax = ext.window.D if emax is None else emax
    out = {}
    for e in range(emax + 1):
        Z = cycles(ext, h, e)
        B = boundaries(ext, h, e)
        picks = linalg.independent_extension(B, Z, ext.p)
        out[e] = [ext.element(Z[i], h, e) for i in picks]
    return out


def minimal_generators_of_homology(ext: SemifreeExtension, h: int, emax=None) -> list:
    """Cycles whose classes form a k-basis of H_h / m H_h, lowest internal degree first."""
    emax = ext.window.D if emax is None else emax
    R = ext.base
    gens = [(R.gen(i), w) for i, w in enumerate(R.weights)]
    Zs = {}
    out = []
    for e in range(emax + 1):
        Z = cycles(ext, h, e)
        Zs[e] = Z
        if Z.shape[0] == 0:
            continue
        rows = [boundaries(ext, h, e)]
        for g, w in gens:
            lower = Zs.get(e - w)
            if lower is None or lower.shape[0] == 0:
                continue
            mz = [ext.vector(ext.mul_ring(ext.element(z, h, e - w), g), h, e) for z in lower]
            rows.append(linalg.as_matrix(mz, Z.shape[1]))
        span = np.vstack(rows) if rows else np.zeros((0, Z.shape[1]), dtype=np.int64)
        for i in linalg.independent_extension(span, Z, ext.p):
            out.append((e, ext.element(Z[i], h, e)))
    return out


# -- constructions --------------------------------------------------------


def _even_kind(flavor):
    return DIVIDED if flavor == ACYCLIC_CLOSURE else POLYNOMIAL


def _prefix(flavor):
    return "y" if flavor == ACYCLIC_CLOSURE else "x"


def _construct(phi: MapPresentation, window: Window, flavor: str) -> ResolutionBuild:
    phi = minimalize_kernel(phi)
    R = phi.source
    ext = SemifreeExtension(R, window)
    build = ResolutionBuild(ext, phi, flavor, window)
    cert = build.certified_D
    pre = _prefix(flavor)
    counter = Counter()

    def adjoin(h, e, z):
        if e > cert:
            raise WindowTooSmall(
                f"generator in bidegree ({h}, {e}) beyond certified internal degree {cert}; raise D"
            )
        counter[h] += 1
        kind = EXTERIOR if h % 2 else _even_kind(flavor)
        v = ext.adjoin(kind, z, name=f"{pre}{h}_{counter[h]}", hdeg=h, ideg=e, check=False)
        build.adjunction_log.append((v.id, z))

    for f in phi.kernel_generators:
        adjoin(1, R.degree(next(iter(f))), ext.scalar(f))
    for n in range(1, window.N):
        gens = minimal_generators_of_homology(ext, n, window.D)
        log.debug("%s: %d generators of H_%d", flavor, len(gens), n)
        for e, z in gens:
            adjoin(n + 1, e, z)
    return build


def acyclic_closure(phi: MapPresentation, window: Window) -> ResolutionBuild:
    return _construct(phi, window, ACYCLIC_CLOSURE)


def minimal_model(phi: MapPresentation, window: Window) -> ResolutionBuild:
    return _construct(phi, window, MINIMAL_MODEL)


def betti_numbers(build: ResolutionBuild) -> list[int]:
    """Rank over R of each homological degree, i.e. normal monomial counts."""
    ext = build.extension
    return [len(ext.all_monomials(h)) if h else 1 for h in range(build.window.N + 1)]


def check_acyclic(build: ResolutionBuild, emax=None) -> dict:
    """H_i = 0 for 1 <= i <= N-1 and H_0 = S degreewise, inside the certified window.

    Returns {"ok": bool, "failures": [...]} with the offending bidegrees.
    """
    from .ring import QuotientRing

    ext = build.extension
    emax = build.certified_D if emax is None else emax
    S = QuotientRing(build.map.quotient_presentation())
    failures = []
    for e in range(emax + 1):
        h0 = homology_dim(ext, 0, e)
        if h0 != S.dim(e):
            failures.append({"h": 0, "e": e, "dim": h0, "expected": S.dim(e)})
        for h in range(1, build.window.N):
            d = homology_dim(ext, h, e)
            if d:
                failures.append({"h": h, "e": e, "dim": d, "expected": 0})
    return {"ok": not failures, "failures": failures, "window": {"N": build.window.N, "D": emax}}
