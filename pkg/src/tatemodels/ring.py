"""Weighted-homogeneous quotients F_p[x_1..x_n]/I and surjections R -> R/(f).

Polynomials are dicts mapping exponent tuples to residues mod p. The
monomial order is weighted degree, then reverse lexicographic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .coeffs import inv_mod, is_prime

Mono = tuple  # exponent vector
Poly = dict  # Mono -> int in [1, p)


class PresentationError(ValueError):
    """Bad ring or map presentation (inhomogeneous, wrong arity, ...)."""

    def __init__(self, message, index=None, where="relation"):
        super().__init__(message)
        self.index = index
        self.where = where


# -- monomial helpers -------------------------------------------------------


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Mono, a: Mono) -> Mono:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def wdeg(m: Mono, weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(m, weights))


def order_key(m: Mono, weights: Sequence[int]):
    """Sort key, larger is bigger: weighted degree then reverse lex."""
    return (wdeg(m, weights), tuple(-e for e in reversed(m)))


def monomials_of_degree(weights: Sequence[int], e: int) -> list[Mono]:
    n = len(weights)
    out = []

    def rec(i, left, acc):
        if i == n:
            if left == 0:
                out.append(tuple(acc))
            return
        w = weights[i]
        for k in range(left // w + 1):
            acc.append(k)
            rec(i + 1, left - k * w, acc)
            acc.pop()

    if e >= 0:
        rec(0, e, [])
    return out


# -- polynomial helpers -----------------------------------------------------


def poly_clean(f: Poly, p: int) -> Poly:
    return {m: c % p for m, c in f.items() if c % p}


def poly_add(f: Poly, g: Poly, p: int, scale: int = 1) -> Poly:
    out = dict(f)
    for m, c in g.items():
        v = (out.get(m, 0) + scale * c) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_mul_mono(f: Poly, m: Mono, c: int, p: int) -> Poly:
    return {mono_mul(k, m): v * c % p for k, v in f.items() if v * c % p}


def poly_mul(f: Poly, g: Poly, p: int) -> Poly:
    out: Poly = {}
    for a, ca in f.items():
        for b, cb in g.items():
            m = mono_mul(a, b)
            v = (out.get(m, 0) + ca * cb) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def leading(f: Poly, weights) -> Mono:
    return max(f, key=lambda m: order_key(m, weights))


def is_homogeneous(f: Poly, weights) -> bool:
    return len({wdeg(m, weights) for m in f}) <= 1


def poly_degree(f: Poly, weights) -> int:
    if not f:
        raise ValueError("zero polynomial has no degree")
    return wdeg(next(iter(f)), weights)


# -- Groebner bases ---------------------------------------------------------


def _reduce(f: Poly, basis: list[Poly], leads: list[Mono], weights, p: int) -> Poly:
    """Full remainder of f on division by basis."""
    f = dict(f)
    rem: Poly = {}
    while f:
        lm = leading(f, weights)
        lc = f[lm]
        for g, lg in zip(basis, leads):
            if mono_divides(lg, lm):
                q = mono_div(lm, lg)
                scale = lc * inv_mod(g[lg], p) % p
                f = poly_add(f, poly_mul_mono(g, q, scale, p), p, -1)
                break
        else:
            rem[lm] = lc
            del f[lm]
    return rem


def _monic(f: Poly, weights, p: int) -> Poly:
    lc = f[leading(f, weights)]
    inv = inv_mod(lc, p)
    return {m: c * inv % p for m, c in f.items()}


def buchberger(relations: Iterable[Poly], weights: Sequence[int], p: int) -> list[Poly]:
    """Reduced Groebner basis of a homogeneous ideal, weighted degrevlex order."""
    basis = []
    for i, f in enumerate(relations):
        f = poly_clean(f, p)
        if not f:
            continue
        if not is_homogeneous(f, weights):
            raise PresentationError(f"relation {i} is not homogeneous", index=i)
        basis.append(_monic(f, weights, p))
    leads = [leading(g, weights) for g in basis]
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        # lowest lcm degree first keeps the homogeneous run short
        pairs.sort(key=lambda ij: order_key(mono_lcm(leads[ij[0]], leads[ij[1]]), weights))
        i, j = pairs.pop(0)
        li, lj = leads[i], leads[j]
        if all(min(a, b) == 0 for a, b in zip(li, lj)):
            continue  # coprime leading monomials
        lcm = mono_lcm(li, lj)
        s = poly_add(
            poly_mul_mono(basis[i], mono_div(lcm, li), 1, p),
            poly_mul_mono(basis[j], mono_div(lcm, lj), 1, p),
            p,
            -1,
        )
        r = _reduce(s, basis, leads, weights, p)
        if r:
            r = _monic(r, weights, p)
            basis.append(r)
            leads.append(leading(r, weights))
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    # minimalise then interreduce
    keep = []
    for i, li in enumerate(leads):
        if any(j != i and mono_divides(leads[j], li) and (leads[j] != li or j < i) for j in range(len(leads))):
            continue
        keep.append(i)
    basis = [basis[i] for i in keep]
    leads = [leads[i] for i in keep]
    reduced = []
    for k, g in enumerate(basis):
        others = basis[:k] + basis[k + 1 :]
        olead = leads[:k] + leads[k + 1 :]
        tail = _reduce({m: c for m, c in g.items() if m != leads[k]}, others, olead, weights, p)
        tail[leads[k]] = 1
        reduced.append(tail)
    reduced.sort(key=lambda g: order_key(leading(g, weights), weights))
    return reduced


# -- presentations ----------------------------------------------------------


@dataclass(frozen=True)
class RingPresentation:
    p: int
    generators: tuple[tuple[str, int], ...]
    relations: tuple[tuple[tuple[int, tuple[int, ...]], ...], ...] = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise PresentationError(f"p = {self.p} is not prime", where="p")
        names = [g[0] for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator names", where="generators")
        for i, (name, w) in enumerate(self.generators):
            if not isinstance(w, int) or w < 1:
                raise PresentationError(f"generator {name} needs a positive weight", index=i, where="generators")
        n = len(self.generators)
        for i, rel in enumerate(self.relations):
            for _, exps in rel:
                if len(exps) != n:
                    raise PresentationError(f"relation {i} has an exponent vector of wrong length", index=i)
            f = poly_clean({tuple(e): c for c, e in rel}, self.p)
            if f and not is_homogeneous(f, self.weights):
                raise PresentationError(f"relation {i} is not homogeneous", index=i)
            if f and poly_degree(f, self.weights) < 1:
                raise PresentationError(f"relation {i} has degree 0", index=i)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g[0] for g in self.generators)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(g[1] for g in self.generators)

    def relation_polys(self) -> list[Poly]:
        out = []
        for rel in self.relations:
            f: Poly = {}
            for c, e in rel:
                f = poly_add(f, {tuple(e): 1}, self.p, c)
            out.append(f)
        return out

    @classmethod
    def from_strings(cls, p: int, generators, relations=()):
        gens = tuple((g, 1) if isinstance(g, str) else (g[0], int(g[1])) for g in generators)
        names = [g[0] for g in gens]
        rels = tuple(poly_to_terms(parse_poly(r, names, p)) for r in relations)
        return cls(p, gens, rels)


def poly_to_terms(f: Poly):
    return tuple(sorted((c, tuple(m)) for m, c in f.items()))


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_poly(text: str, names: Sequence[str], p: int) -> Poly:
    """Parse strings like ``"x^2 - 2*x*y + y^3"``."""
    idx = {n: i for i, n in enumerate(names)}
    n = len(names)
    f: Poly = {}
    text = text.replace("**", "^").strip()
    if text in ("", "0"):
        return f
    for sign, body in _TERM.findall(text):
        coeff = -1 if sign == "-" else 1
        exps = [0] * n
        for factor in body.strip().split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"cannot parse {text!r}")
            if factor.isdigit():
                coeff *= int(factor)
                continue
            name, _, power = factor.partition("^")
            name = name.strip()
            if name not in idx:
                raise ValueError(f"unknown generator {name!r} in {text!r}")
            exps[idx[name]] += int(power) if power else 1
        f = poly_add(f, {tuple(exps): 1}, p, coeff)
    return f


def format_poly(f: Poly, names: Sequence[str], weights=None) -> str:
    if not f:
        return "0"
    keys = sorted(f, key=(lambda m: order_key(m, weights)) if weights else None, reverse=True)
    parts = []
    for m in keys:
        c = f[m]
        mono = "*".join(
            (nm if e == 1 else f"{nm}^{e}") for nm, e in zip(names, m) if e
        )
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts)


class QuotientRing:
    """R = F_p[x]/I with normal forms and graded bases; immutable once built."""

    def __init__(self, presentation: RingPresentation):
        self.presentation = presentation
        self.p = presentation.p
        self.names = presentation.names
        self.weights = presentation.weights
        self.nvars = len(self.weights)
        self.groebner_basis = tuple(buchberger(presentation.relation_polys(), self.weights, self.p))
        self._leads = [leading(g, self.weights) for g in self.groebner_basis]
        self._nf_cache: dict[Mono, Poly] = {}
        self._basis_cache: dict[int, tuple[Mono, ...]] = {}
        self.one: Mono = (0,) * self.nvars

    # elements
    def gen(self, name_or_index) -> Poly:
        i = self.names.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        m = [0] * self.nvars
        m[i] = 1
        return self.normal_form({tuple(m): 1})

    def parse(self, text: str) -> Poly:
        return self.normal_form(parse_poly(text, self.names, self.p))

    def format(self, f: Poly) -> str:
        return format_poly(f, self.names, self.weights)

    def degree(self, m: Mono) -> int:
        return wdeg(m, self.weights)

    def is_standard(self, m: Mono) -> bool:
        return not any(mono_divides(l, m) for l in self._leads)

    def mono_nf(self, m: Mono) -> Poly:
        r = self._nf_cache.get(m)
        if r is None:
            if self.is_standard(m):
                r = {m: 1}
            else:
                r = _reduce({m: 1}, list(self.groebner_basis), self._leads, self.weights, self.p)
            self._nf_cache[m] = r
        return r

    def normal_form(self, f: Poly) -> Poly:
        out: Poly = {}
        for m, c in f.items():
            c %= self.p
            if c:
                out = poly_add(out, self.mono_nf(m), self.p, c)
        return out

    def mul(self, f: Poly, g: Poly) -> Poly:
        out: Poly = {}
        for a, ca in f.items():
            for b, cb in g.items():
                out = poly_add(out, self.mono_nf(mono_mul(a, b)), self.p, ca * cb)
        return out

    def mono_product(self, a: Mono, b: Mono) -> Poly:
        return self.mono_nf(mono_mul(a, b))

    def is_zero(self, f: Poly) -> bool:
        return not self.normal_form(f)

    # graded structure
    def degree_basis(self, e: int) -> tuple[Mono, ...]:
        """Standard monomials of weighted degree e, largest first."""
        b = self._basis_cache.get(e)
        if b is None:
            b = tuple(
                sorted(
                    (m for m in monomials_of_degree(self.weights, e) if self.is_standard(m)),
                    key=lambda m: order_key(m, self.weights),
                    reverse=True,
                )
            )
            self._basis_cache[e] = b
        return b

    def dim(self, e: int) -> int:
        return len(self.degree_basis(e))

    def max_relation_degree(self) -> int:
        rels = [f for f in self.presentation.relation_polys() if f]
        return max((poly_degree(f, self.weights) for f in rels), default=0)

    def in_maximal_ideal(self, f: Poly) -> bool:
        return self.normal_form(f).get(self.one, 0) == 0

    def vector(self, f: Poly, e: int) -> np.ndarray:
        basis = self.degree_basis(e)
        idx = {m: i for i, m in enumerate(basis)}
        v = np.zeros(len(basis), dtype=np.int64)
        for m, c in self.normal_form(f).items():
            v[idx[m]] = c
        return v

    def from_vector(self, v, e: int) -> Poly:
        return {m: int(c) for m, c in zip(self.degree_basis(e), v) if c % self.p}


def macaulay_dimension(presentation: RingPresentation, e: int) -> int:
    """dim_k R_e by plain linear algebra on monomials; used as an oracle."""
    p, weights = presentation.p, presentation.weights
    mons = monomials_of_degree(weights, e)
    idx = {m: i for i, m in enumerate(mons)}
    rows = []
    for f in presentation.relation_polys():
        if not f:
            continue
        d = poly_degree(f, weights)
        for q in monomials_of_degree(weights, e - d):
            row = np.zeros(len(mons), dtype=np.int64)
            for m, c in f.items():
                row[idx[mono_mul(m, q)]] = c
            rows.append(row)
    if not mons:
        return 0
    return len(mons) - linalg.rank(linalg.as_matrix(rows, len(mons)), p)


@dataclass
class MapPresentation:
    """phi: R -> S = R/(f_1..f_c)."""

    source: QuotientRing
    kernel_generators: list = field(default_factory=list)

    def __post_init__(self):
        R = self.source
        gens = []
        for i, f in enumerate(self.kernel_generators):
            f = R.normal_form(f)
            if f and not is_homogeneous(f, R.weights):
                raise PresentationError(f"kernel generator {i} is not homogeneous", index=i, where="kernel")
            if f and poly_degree(f, R.weights) < 1:
                raise PresentationError(f"kernel generator {i} is a unit", index=i, where="kernel")
            gens.append(f)
        self.kernel_generators = gens

    @property
    def p(self) -> int:
        return self.source.p

    def degrees(self) -> list[int]:
        return [poly_degree(f, self.source.weights) for f in self.kernel_generators if f]

    def guard_band(self) -> int:
        return max([self.source.max_relation_degree()] + self.degrees())

    def quotient_presentation(self) -> RingPresentation:
        pres = self.source.presentation
        extra = tuple(poly_to_terms(f) for f in self.kernel_generators if f)
        return RingPresentation(pres.p, pres.generators, pres.relations + extra)


def ideal_span(R: QuotientRing, gens: list[Poly], e: int) -> np.ndarray:
    """Rows spanning (gens)_e inside R_e."""
    rows = []
    for f in gens:
        if not f:
            continue
        d = poly_degree(f, R.weights)
        for q in monomials_of_degree(R.weights, e - d):
            if R.is_standard(q):
                rows.append(R.vector(R.mul(f, {q: 1}), e))
    return linalg.as_matrix(rows, R.dim(e))


def minimalize_kernel(phi: MapPresentation) -> MapPresentation:
    """Keep generators whose images form a k-basis of (f)/m(f).

    Candidates are scanned in a canonical order (degree, then terms), so the
    result does not depend on the order in which generators were listed.
    """
    R = phi.source
    gens = sorted(
        ((poly_degree(f, R.weights), poly_to_terms(f), f) for f in phi.kernel_generators if f),
        key=lambda t: (t[0], t[1]),
    )
    kept: list[Poly] = []
    for d, _, f in gens:
        # m*(f) in degree d is spanned by multiples of kept generators of lower degree
        lower = [g for g in kept if poly_degree(g, R.weights) < d]
        span = ideal_span(R, lower, d)
        same = [R.vector(g, d) for g in kept if poly_degree(g, R.weights) == d]
        if same:
            span = np.vstack([span] + [s.reshape(1, -1) for s in same])
        if not linalg.in_span(span, R.vector(f, d), R.p):
            kept.append(f)
    return MapPresentation(R, kept)
