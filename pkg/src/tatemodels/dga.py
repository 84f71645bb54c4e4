"""Semifree extensions R[X] and R<Y> with Koszul signs and divided powers.

A DG element is a plain dict ``{(mono, rmono): c}``: ``mono`` is a normal
monomial ``((vid, exp), ...)`` sorted in the variable well-order, ``rmono``
a standard monomial of the base ring and ``c`` a nonzero residue mod p.
For divided variables ``exp`` is the divided-power index, for exterior
variables it is always 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from .coeffs import binom_mod_p
from .ring import QuotientRing, poly_add

EXTERIOR = "exterior"
POLYNOMIAL = "polynomial"
DIVIDED = "divided"
KINDS = (EXTERIOR, POLYNOMIAL, DIVIDED)


class NotACycle(ValueError):
    pass


class ParityMismatch(ValueError):
    pass


class WindowOverflow(ArithmeticError):
    """A product left the homological window; nothing is silently dropped."""


@dataclass(frozen=True)
class Window:
    N: int
    D: int

    def __post_init__(self):
        if self.N < 1 or self.D < 1:
            raise ValueError("window needs N >= 1 and D >= 1")


@dataclass
class DgVariable:
    id: int
    name: str
    kind: str
    hdeg: int
    ideg: int
    boundary: dict

    @property
    def odd(self) -> bool:
        return self.hdeg % 2 == 1


def is_power_of(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


class SemifreeExtension:
    """Base ring plus an append-only, well-ordered registry of variables."""

    def __init__(self, base: QuotientRing, window: Window):
        self.base = base
        self.p = base.p
        self.window = window
        self.variables: list[DgVariable] = []
        self.frozen = False
        self._mul_cache: dict = {}
        self._d_cache: dict = {}
        self._mono_tables: dict = {}
        self._basis_cache: dict = {}

    # -- registry -----------------------------------------------------------
    def key(self, vid: int):
        return (self.variables[vid].hdeg, vid)

    def adjoin(self, kind, boundary, name=None, hdeg=None, ideg=None, check=True) -> DgVariable:
        """Adjoin a variable v with d(v) = boundary; returns the new variable."""
        if self.frozen:
            raise RuntimeError("extension is frozen")
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        boundary = {k: c % self.p for k, c in boundary.items() if c % self.p}
        if boundary:
            bh, be = self.bidegree(boundary)
            if hdeg is not None and hdeg != bh + 1:
                raise ParityMismatch(f"boundary has homological degree {bh}, expected {hdeg - 1}")
            if ideg is not None and ideg != be:
                raise ValueError(f"boundary has internal degree {be}, expected {ideg}")
            hdeg, ideg = bh + 1, be
        elif hdeg is None or ideg is None:
            raise ValueError("zero boundary needs explicit degrees")
        if hdeg < 1:
            raise ValueError("variables live in positive homological degree")
        if (kind == EXTERIOR) != (hdeg % 2 == 1):
            raise ParityMismatch(f"{kind} variable cannot sit in homological degree {hdeg}")
        if check and boundary and self.d(boundary):
            raise NotACycle("boundary of a new variable must be a cycle")
        vid = len(self.variables)
        var = DgVariable(vid, name or f"v{vid}", kind, hdeg, ideg, boundary)
        self.variables.append(var)
        self._mono_tables.clear()
        self._basis_cache.clear()
        return var

    def freeze(self):
        self.frozen = True
        return self

    def ordered(self) -> list[DgVariable]:
        return sorted(self.variables, key=lambda v: self.key(v.id))

    def by_degree(self, h: int) -> list[DgVariable]:
        return [v for v in self.ordered() if v.hdeg == h]

    # -- elements -----------------------------------------------------------
    @property
    def one_r(self):
        return self.base.one

    def one(self) -> dict:
        return {((), self.one_r): 1}

    def scalar(self, f) -> dict:
        return {((), m): c % self.p for m, c in self.base.normal_form(f).items()}

    def var(self, vid: int, exp: int = 1) -> dict:
        v = self.variables[vid]
        if v.kind == EXTERIOR and exp > 1:
            return {}
        if exp == 0:
            return self.one()
        return {(((vid, exp),), self.one_r): 1}

    def monomial(self, mono) -> dict:
        return {(tuple(mono), self.one_r): 1}

    def add(self, u: dict, v: dict, scale: int = 1) -> dict:
        p = self.p
        out = dict(u)
        for k, c in v.items():
            s = (out.get(k, 0) + scale * c) % p
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def scale(self, u: dict, c: int) -> dict:
        c %= self.p
        return {k: v * c % self.p for k, v in u.items()} if c else {}

    def mul_ring(self, u: dict, f) -> dict:
        """Multiply by a ring element (a polynomial dict)."""
        out: dict = {}
        R = self.base
        for (m, r), c in u.items():
            for rm, rc in f.items():
                for nm, nc in R.mono_product(r, rm).items():
                    k = (m, nm)
                    s = (out.get(k, 0) + c * rc * nc) % self.p
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def hdeg_mono(self, m) -> int:
        V = self.variables
        return sum(V[v].hdeg * e for v, e in m)

    def ideg_mono(self, m) -> int:
        V = self.variables
        return sum(V[v].ideg * e for v, e in m)

    def bidegree(self, u: dict):
        """(homological, internal) bidegree of a nonzero homogeneous element."""
        if not u:
            return None
        degs = {(self.hdeg_mono(m), self.ideg_mono(m) + self.base.degree(r)) for m, r in u}
        if len(degs) != 1:
            raise ValueError(f"element is not bihomogeneous: {sorted(degs)}")
        return degs.pop()

    # -- multiplication ----------------------------------------------------
    def mono_mul(self, a, b):
        """a*b = c * m for normal monomials; returns (c, m) with c = 0 if it vanishes."""
        if not a:
            return 1, b
        if not b:
            return 1, a
        ck = (a, b)
        hit = self._mul_cache.get(ck)
        if hit is not None:
            return hit
        V, p = self.variables, self.p
        coef = 1
        res = dict(a)
        for v, e in b:
            if v in res:
                kind = V[v].kind
                if kind == EXTERIOR:
                    self._mul_cache[ck] = (0, None)
                    return 0, None
                if kind == DIVIDED:
                    coef = coef * binom_mod_p(res[v] + e, e, p) % p
                    if not coef:
                        self._mul_cache[ck] = (0, None)
                        return 0, None
                res[v] += e
            else:
                res[v] = e
        odd_a = [self.key(v) for v, _ in a if V[v].hdeg % 2]
        inversions = 0
        if odd_a:
            for v, _ in b:
                if V[v].hdeg % 2:
                    kb = self.key(v)
                    inversions += sum(1 for ka in odd_a if ka > kb)
        if inversions % 2:
            coef = (-coef) % p
        m = tuple(sorted(res.items(), key=lambda t: self.key(t[0])))
        self._mul_cache[ck] = (coef, m)
        return coef, m

    def mul(self, u: dict, v: dict) -> dict:
        if not u or not v:
            return {}
        hu = self.hdeg_mono(next(iter(u))[0])
        hv = self.hdeg_mono(next(iter(v))[0])
        if hu + hv > self.window.N:
            raise WindowOverflow(f"product of degree {hu + hv} exceeds N = {self.window.N}")
        R, p = self.base, self.p
        out: dict = {}
        for (ma, ra), ca in u.items():
            for (mb, rb), cb in v.items():
                c, m = self.mono_mul(ma, mb)
                if not c:
                    continue
                c = c * ca * cb
                for rm, rc in R.mono_product(ra, rb).items():
                    k = (m, rm)
                    s = (out.get(k, 0) + c * rc) % p
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def power(self, u: dict, n: int) -> dict:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, u)
        return out

    # -- differential -------------------------------------------------------
    def d_mono(self, m) -> dict:
        if not m:
            return {}
        hit = self._d_cache.get(m)
        if hit is not None:
            return hit
        (v, a), rest = m[0], m[1:]
        var = self.variables[v]
        bd = var.boundary
        if var.kind == EXTERIOR:
            dF = bd
        elif var.kind == DIVIDED:
            # d(y^(a)) = d(y) y^(a-1)
            dF = self.mul(bd, self.var(v, a - 1))
        else:
            dF = self.scale(self.mul(bd, self.var(v, a - 1)), a)
        out = self.mul(dF, self.monomial(rest)) if dF else {}
        if rest:
            drest = self.d_mono(rest)
            if drest:
                sign = -1 if (var.hdeg * a) % 2 else 1
                out = self.add(out, self.mul(self.monomial(((v, a),)), drest), sign)
        self._d_cache[m] = out
        return out

    def d(self, u: dict) -> dict:
        out: dict = {}
        for (m, r), c in u.items():
            dm = self.d_mono(m)
            if dm:
                out = self.add(out, self.mul_ring(dm, {r: c}))
        return out

    # -- graded bases -------------------------------------------------------
    def monomials(self, h: int):
        """Normal monomials of homological degree h with internal degree <= D."""
        table = self._mono_tables.get(h)
        if table is not None:
            return table
        D = self.window.D
        vars_ = [v for v in self.ordered() if v.hdeg <= h and v.ideg <= D]
        out = []

        def rec(i, hleft, eleft, acc):
            if hleft == 0:
                out.append(tuple(acc))
                return
            for j in range(i, len(vars_)):
                v = vars_[j]
                if v.hdeg > hleft:
                    break
                top = 1 if v.kind == EXTERIOR else hleft // v.hdeg
                for e in range(1, top + 1):
                    if v.hdeg * e > hleft or v.ideg * e > eleft:
                        break
                    acc.append((v.id, e))
                    rec(j + 1, hleft - v.hdeg * e, eleft - v.ideg * e, acc)
                    acc.pop()

        rec(0, h, D, [])
        out.sort(key=self._mono_sort_key, reverse=True)
        self._mono_tables[h] = out
        return out

    def _mono_sort_key(self, m):
        return tuple((self.key(v), e) for v, e in m)

    def basis(self, h: int, e: int):
        """k-basis of the bidegree (h, e) piece as (mono, rmono) pairs plus an index."""
        ck = (h, e)
        hit = self._basis_cache.get(ck)
        if hit is not None:
            return hit
        R = self.base
        items = []
        for m in self.monomials(h):
            em = self.ideg_mono(m)
            if em <= e:
                for r in R.degree_basis(e - em):
                    items.append((m, r))
        index = {k: i for i, k in enumerate(items)}
        self._basis_cache[ck] = (items, index)
        return items, index

    def dim(self, h: int, e: int) -> int:
        if h < 0:
            return 0
        return len(self.basis(h, e)[0])

    def vector(self, u: dict, h: int, e: int) -> np.ndarray:
        items, index = self.basis(h, e)
        v = np.zeros(len(items), dtype=np.int64)
        for k, c in u.items():
            v[index[k]] = c
        return v

    def element(self, vec, h: int, e: int) -> dict:
        items, _ = self.basis(h, e)
        return {items[i]: int(c) % self.p for i, c in enumerate(vec) if int(c) % self.p}

    def d_matrix(self, h: int, e: int) -> np.ndarray:
        """Matrix of d: A_(h,e) -> A_(h-1,e), column convention."""
        src, _ = self.basis(h, e)
        rows = self.dim(h - 1, e) if h >= 1 else 0
        M = np.zeros((rows, len(src)), dtype=np.int64)
        if h < 1:
            return M
        _, tindex = self.basis(h - 1, e)
        for j, (m, r) in enumerate(src):
            dm = self.d_mono(m)
            if not dm:
                continue
            for k, c in self.mul_ring(dm, {r: 1}).items():
                M[tindex[k], j] = c
        return M

    # -- counting -----------------------------------------------------------
    def monomial_counts(self, N=None) -> list[int]:
        """Number of normal monomials per homological degree, ignoring internal degree."""
        N = self.window.N if N is None else N
        series = [0] * (N + 1)
        series[0] = 1
        for v in self.ordered():
            if v.hdeg > N:
                continue
            new = list(series)
            if v.kind == EXTERIOR:
                for h in range(N, v.hdeg - 1, -1):
                    new[h] = series[h] + series[h - v.hdeg]
            else:
                for h in range(v.hdeg, N + 1):
                    new[h] = series[h] + new[h - v.hdeg]
            series = new
        return series

    def all_monomials(self, h: int):
        """Normal monomials of homological degree h with no internal cut-off."""
        vars_ = [v for v in self.ordered() if v.hdeg <= h]
        out = []

        def rec(i, hleft, acc):
            if hleft == 0:
                out.append(tuple(acc))
                return
            for j in range(i, len(vars_)):
                v = vars_[j]
                if v.hdeg > hleft:
                    break
                top = 1 if v.kind == EXTERIOR else hleft // v.hdeg
                for e in range(1, top + 1):
                    acc.append((v.id, e))
                    rec(j + 1, hleft - v.hdeg * e, acc)
                    acc.pop()

        rec(0, h, [])
        return out

    def format(self, u: dict) -> str:
        if not u:
            return "0"
        parts = []
        for (m, r), c in sorted(u.items(), key=lambda t: (self._mono_sort_key(t[0][0]), t[0][1]), reverse=True):
            f = []
            if c != 1:
                f.append(str(c))
            rs = self.base.format({r: 1})
            if rs != "1":
                f.append(rs)
            for v, e in m:
                name = self.variables[v].name
                kind = self.variables[v].kind
                if e == 1:
                    f.append(name)
                elif kind == DIVIDED:
                    f.append(f"{name}^({e})")
                else:
                    f.append(f"{name}^{e}")
            parts.append("*".join(f) if f else "1")
        return " + ".join(parts)


# -- indecomposables ----------------------------------------------------------


def _splits(ext: SemifreeExtension, m):
    """All factorisations m = a*b with both factors of positive degree."""
    ranges = [range(e + 1) if ext.variables[v].kind != EXTERIOR else range(2) for v, e in m]
    for exps in iproduct(*ranges):
        a = tuple((v, k) for (v, _), k in zip(m, exps) if k)
        b = tuple((v, e - k) for (v, e), k in zip(m, exps) if e - k)
        if a and b:
            yield a, b


def is_decomposable_monomial(ext: SemifreeExtension, m) -> bool:
    """True iff m lies in the span of products of two positive-degree elements."""
    for a, b in _splits(ext, m):
        c, prod = ext.mono_mul(a, b)
        if c and prod == m:
            return True
    return False


def ind_basis(ext: SemifreeExtension, h: int):
    """Monomials of degree h whose classes form a basis of ind(A)_h."""
    if h < 1:
        return []
    return [m for m in ext.all_monomials(h) if not is_decomposable_monomial(ext, m)]


def _project_ind(ext, u, basis_index):
    """Reduce u modulo m*A + (A_+)^2 onto the ind basis."""
    one = ext.one_r
    out = {}
    for (m, r), c in u.items():
        if r == one and m in basis_index:
            out[basis_index[m]] = c
    return out


@dataclass
class GradedComplex:
    """A graded k-complex given by bases per degree and sparse differential entries."""

    basis: dict  # degree -> list of labels
    differential: dict  # degree -> {(target_idx, source_idx): c}

    def dims(self) -> dict:
        return {h: len(b) for h, b in self.basis.items()}

    def is_zero_differential(self) -> bool:
        return not any(self.differential.values())


def indecomposables(ext: SemifreeExtension, N=None) -> GradedComplex:
    """ind(A) = m_A / (m + m_A^2) with its induced differential."""
    N = ext.window.N if N is None else N
    for v in ext.by_degree(1):
        for (m, r), c in v.boundary.items():
            if m == () and r == ext.one_r:
                raise ValueError("d(A_1) is not contained in the maximal ideal")
    basis = {h: ind_basis(ext, h) for h in range(1, N + 1)}
    diff = {}
    for h in range(1, N + 1):
        tgt = {m: i for i, m in enumerate(basis.get(h - 1, []))}
        entries = {}
        for j, m in enumerate(basis[h]):
            for i, c in _project_ind(ext, ext.d_mono(m), tgt).items():
                entries[(i, j)] = c
        diff[h] = entries
    return GradedComplex(basis, diff)


def gamma_indecomposables(ext: SemifreeExtension, N=None) -> GradedComplex:
    """Complex on the variables, d reduced modulo m*A + m_A^(2)."""
    N = ext.window.N if N is None else N
    basis = {h: [((v.id, 1),) for v in ext.by_degree(h)] for h in range(1, N + 1)}
    diff = {}
    one = ext.one_r
    for h in range(1, N + 1):
        tgt = {m: i for i, m in enumerate(basis.get(h - 1, []))}
        entries = {}
        for j, m in enumerate(basis[h]):
            for (mm, r), c in ext.variables[m[0][0]].boundary.items():
                if r == one and mm in tgt:
                    entries[(tgt[mm], j)] = c
        diff[h] = entries
    return GradedComplex(basis, diff)


def y_p_infinity(ext: SemifreeExtension, N=None):
    """The classes y^(p^i), y even divided, i >= 1, as (vid, i, degree) inside the window."""
    N = ext.window.N if N is None else N
    p = ext.p
    out = []
    for v in ext.ordered():
        if v.kind != DIVIDED:
            continue
        i = 1
        while v.hdeg * p**i <= N:
            out.append((v.id, i, v.hdeg * p**i))
            i += 1
    return out


def linear_part(ext: SemifreeExtension, u: dict) -> dict:
    """Coefficients of unit multiples of single variables in u."""
    one = ext.one_r
    return {m[0][0]: c for (m, r), c in u.items() if r == one and len(m) == 1 and m[0][1] == 1}
