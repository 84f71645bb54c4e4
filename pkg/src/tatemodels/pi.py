"""The homotopy Lie algebra read off the quadratic part of a minimal model.

A model variable x contributes the dual functional sx* in cohomological
degree |x| + 1. Brackets and reduced squares come from the word-length-2
part of d(x_l) after reducing ring coefficients modulo the maximal ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .dga import EXTERIOR, SemifreeExtension


@dataclass
class QuadraticPart:
    """q[l] maps (i, j) with i before j to q^l_ij and (i, i) to q^l_i."""

    p: int
    q: dict = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not any(self.q.values())

    def terms(self):
        for l, row in sorted(self.q.items()):
            for (i, j), c in sorted(row.items()):
                yield l, i, j, c


def quadratic_part(ext: SemifreeExtension) -> QuadraticPart:
    one = ext.one_r
    p = ext.p
    out = {}
    for v in ext.ordered():
        row = {}
        for (m, r), c in v.boundary.items():
            if r != one or sum(e for _, e in m) != 2:
                continue
            key = (m[0][0], m[0][0]) if len(m) == 1 else (m[0][0], m[1][0])
            row[key] = (row.get(key, 0) + c) % p
        row = {k: c for k, c in row.items() if c}
        if row:
            out[v.id] = row
    return QuadraticPart(p, out)


class LiePresentation:
    """Structure constants on the dual basis, indexed by model variable id."""

    def __init__(self, p: int, degrees: dict, brackets: dict, squares: dict, names=None, N=None):
        self.p = p
        self.degrees = dict(degrees)  # vid -> cohomological degree
        self.brackets = brackets  # (j, i), j after i -> {l: c}
        self.squares = squares  # i -> {l: c}
        self.names = names or {v: f"v{v}" for v in degrees}
        self.N = N
        self._order = {v: k for k, v in enumerate(sorted(self.degrees, key=lambda v: (self.degrees[v], v)))}

    @property
    def basis(self) -> list[int]:
        return sorted(self.degrees, key=self._order.get)

    def dim(self, i: int) -> int:
        return sum(1 for d in self.degrees.values() if d == i)

    def _add(self, acc, vec, c):
        p = self.p
        for l, a in vec.items():
            s = (acc.get(l, 0) + c * a) % p
            if s:
                acc[l] = s
            else:
                acc.pop(l, None)
        return acc

    def bracket_basis(self, a: int, b: int) -> dict:
        p = self.p
        if a == b:
            if self.degrees[a] % 2:
                return {l: 2 * c % p for l, c in self.squares.get(a, {}).items() if 2 * c % p}
            return {}
        if self._order[a] > self._order[b]:
            return dict(self.brackets.get((a, b), {}))
        sign = -1 if (self.degrees[a] * self.degrees[b]) % 2 == 0 else 1
        return {l: sign * c % p for l, c in self.brackets.get((b, a), {}).items()}

    def bracket(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for a, ca in u.items():
            for b, cb in v.items():
                self._add(out, self.bracket_basis(a, b), ca * cb)
        return out

    def square(self, a: int) -> dict:
        return dict(self.squares.get(a, {}))

    def degree(self, u: dict):
        degs = {self.degrees[a] for a in u}
        return degs.pop() if len(degs) == 1 else None

    def export(self) -> dict:
        return {
            "p": self.p,
            "basis": [{"id": v, "name": self.names[v], "degree": self.degrees[v]} for v in self.basis],
            "brackets": [
                [self.names[j], self.names[i], self.names[l], c]
                for (j, i), row in sorted(self.brackets.items())
                for l, c in sorted(row.items())
            ],
            "squares": [[self.names[i], self.names[l], c] for i, row in sorted(self.squares.items()) for l, c in sorted(row.items())],
            "window": {"max_degree": None if self.N is None else self.N + 1},
        }


def homotopy_lie_algebra(ext: SemifreeExtension, qp: QuadraticPart | None = None) -> LiePresentation:
    qp = quadratic_part(ext) if qp is None else qp
    p = ext.p
    degrees = {v.id: v.hdeg + 1 for v in ext.variables if v.hdeg <= ext.window.N}
    brackets: dict = {}
    squares: dict = {}
    for l, i, j, c in qp.terms():
        if i == j:
            squares.setdefault(i, {})[l] = -c % p
        else:
            brackets.setdefault((j, i), {})[l] = c
    names = {v.id: v.name for v in ext.variables}
    return LiePresentation(p, degrees, brackets, squares, names, ext.window.N)


def check_abelian(L: LiePresentation) -> dict:
    for (j, i), row in sorted(L.brackets.items()):
        for l, c in sorted(row.items()):
            if c:
                return {"abelian": False, "witness": {"left": L.names[j], "right": L.names[i], "target": L.names[l], "coefficient": c}}
    return {"abelian": True, "witness": None}


# -- axioms -----------------------------------------------------------------


def check_antisymmetry(L: LiePresentation) -> dict:
    p = L.p
    for a, b in product(L.basis, repeat=2):
        if a == b:
            continue
        sign = -1 if (L.degrees[a] * L.degrees[b]) % 2 else 1
        s = L._add(L.bracket_basis(a, b), L.bracket_basis(b, a), sign)
        if any(c % p for c in s.values()):
            return {"ok": False, "pair": (L.names[a], L.names[b])}
    return {"ok": True, "pair": None}


def check_jacobi(L: LiePresentation) -> dict:
    """Graded Jacobi on basis triples whose total degree stays inside the window."""
    top = max(L.degrees.values(), default=0)
    B = L.basis
    deg = L.degrees
    for a, b, c in product(B, repeat=3):
        if deg[a] + deg[b] + deg[c] > top:
            continue
        acc: dict = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            s = -1 if (deg[x] * deg[z]) % 2 else 1
            L._add(acc, L.bracket({x: 1}, L.bracket_basis(y, z)), s)
        if acc:
            return {"ok": False, "triple": (L.names[a], L.names[b], L.names[c])}
    if L.p == 3:
        for a in B:
            if deg[a] % 2 and 3 * deg[a] <= top:
                if L.bracket({a: 1}, L.bracket_basis(a, a)):
                    return {"ok": False, "triple": (L.names[a],) * 3}
    return {"ok": True, "triple": None}


def check_square_compat(L: LiePresentation) -> dict:
    """[a^[2], b] = [a, [a, b]] for odd-degree a."""
    top = max(L.degrees.values(), default=0)
    deg = L.degrees
    for a in L.basis:
        if not deg[a] % 2:
            continue
        for b in L.basis:
            if 2 * deg[a] + deg[b] > top:
                continue
            lhs = L.bracket(L.square(a), {b: 1})
            rhs = L.bracket({a: 1}, L.bracket_basis(a, b))
            if L._add(lhs, rhs, -1):
                return {"ok": False, "pair": (L.names[a], L.names[b])}
    return {"ok": True, "pair": None}


def _d2_mono(ext: SemifreeExtension, q: dict, m, cache: dict) -> dict:
    if not m:
        return {}
    if m in cache:
        return cache[m]
    p = ext.p
    V = ext.variables
    (v, a), rest = m[0], m[1:]
    out: dict = {}

    def put(c, mono):
        if c % p:
            s = (out.get(mono, 0) + c) % p
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)

    coef = 1 if V[v].kind == EXTERIOR else a
    if coef % p:
        for (i, j), c in q.get(v, {}).items():
            dv = ((i, 2),) if i == j else ((i, 1), (j, 1))
            tail = ((v, a - 1),) if a > 1 else ()
            c1, m1 = ext.mono_mul(dv, tail)
            if not c1:
                continue
            c2, m2 = ext.mono_mul(m1, rest)
            if c2:
                put(coef * c * c1 * c2, m2)
    if rest:
        sign = -1 if (V[v].hdeg * a) % 2 else 1
        for mr, c in _d2_mono(ext, q, rest, cache).items():
            c1, m1 = ext.mono_mul(((v, a),), mr)
            if c1:
                put(sign * c * c1, m1)
    cache[m] = out
    return out


def check_d2_squared(ext: SemifreeExtension, qp: QuadraticPart | None = None) -> dict:
    """The word-length-3 part of d^2 = 0 over k, i.e. d2 d2 vanishes on every variable."""
    qp = quadratic_part(ext) if qp is None else qp
    cache: dict = {}
    for l, row in sorted(qp.q.items()):
        acc: dict = {}
        for (i, j), c in row.items():
            mono = ((i, 2),) if i == j else ((i, 1), (j, 1))
            for mm, cc in _d2_mono(ext, qp.q, mono, cache).items():
                s = (acc.get(mm, 0) + c * cc) % ext.p
                if s:
                    acc[mm] = s
                else:
                    acc.pop(mm, None)
        if acc:
            return {"ok": False, "variable": ext.variables[l].name}
    return {"ok": True, "variable": None}


def check_dimensions(L: LiePresentation, model_counts: list[int]) -> dict:
    """dim pi^i = number of model variables in degree i - 1."""
    bad = [i for i in range(2, len(model_counts) + 1) if L.dim(i) != model_counts[i - 1]]
    return {"ok": not bad, "mismatches": bad}


# -- split structure ----------------------------------------------------------


@dataclass
class SplitStructure:
    """Dual basis split into duals of the x_0(y) and of the extra variables."""

    L: list
    L_infinity: list


def split_structure(gamma, L: LiePresentation) -> SplitStructure:
    small, rest = [], []
    for v in L.basis:
        family, _, i = gamma.families.get(v, ("x", None, 0))
        (small if family == "x" and i == 0 else rest).append(v)
    return SplitStructure(small, rest)


def check_theorem_abelian(gamma, L: LiePresentation | None = None) -> dict:
    """Clauses (a)-(d) for pi of a weakly-closed map, split along the comparison families."""
    from .dga import y_p_infinity

    X, Y = gamma.source, gamma.target
    p = X.p
    N = X.window.N
    L = homotopy_lie_algebra(X) if L is None else L
    fam = gamma.families
    split = split_structure(gamma, L)
    small, infinite = split.L, split.L_infinity
    clauses = {}

    # (a) [pi, L_inf] = 0
    bad = None
    for a in L.basis:
        for b in infinite:
            if L.bracket_basis(a, b):
                bad = (L.names[a], L.names[b])
                break
        if bad:
            break
    clauses["a"] = {"ok": bad is None, "witness": bad}

    # (b) graded dimensions
    ypinf = y_p_infinity(Y, N)
    mism = []
    for i in range(2, N + 2):
        l_dim = sum(1 for v in small if L.degrees[v] == i)
        y_dim = sum(1 for v in Y.variables if v.hdeg == i - 1)
        li_dim = sum(1 for v in infinite if L.degrees[v] == i)
        yp = sum(1 for _, _, d in ypinf if d == i - 1) + sum(1 for _, _, d in ypinf if d == i - 2 and d + 1 <= N)
        if l_dim != y_dim or li_dim != yp:
            mism.append({"degree": i, "L": l_dim, "Y": y_dim, "L_inf": li_dim, "expected_L_inf": yp})
    clauses["b"] = {"ok": not mism, "mismatches": mism}

    # (c) / (d) squares on L_inf
    if p > 2:
        bad = next((L.names[v] for v in infinite if L.square(v)), None)
        clauses["c"] = {"ok": bad is None, "witness": bad}
        clauses["d"] = {"ok": True, "vacuous": True}
    else:
        clauses["c"] = {"ok": True, "vacuous": True}
        bad = None
        for v in infinite:
            family, y, i = fam[v]
            want = {}
            if family == "x":
                nxt = gamma.by_family.get(("xprime", y, i + 1))
                if nxt is not None:
                    want = {nxt: 1}
            if L.square(v) != want:
                bad = {"element": L.names[v], "square": {L.names[k]: c for k, c in L.square(v).items()}}
                break
        clauses["d"] = {"ok": bad is None, "witness": bad}

    notes = []
    sq_small = {L.names[v]: {L.names[k]: c for k, c in L.square(v).items()} for v in small if L.square(v)}
    if sq_small:
        notes.append({"squares_on_L": sq_small, "scope": "the square rule is asserted for L_inf only"})
    return {
        "ok": all(c["ok"] for c in clauses.values()),
        "clauses": clauses,
        "L": [L.names[v] for v in small],
        "L_inf": [L.names[v] for v in infinite],
        "notes": notes,
        "window": {"N": N, "D": X.window.D, "max_degree": N + 1},
    }
