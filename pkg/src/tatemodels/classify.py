"""Structural predicates on closures and the numeric relations between deviations.

Predicates are tri-state: True, False, or None when the window cannot
decide. Every verdict carries the window it was certified in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil

from .dga import is_decomposable_monomial
from .resolve import ResolutionBuild


@dataclass
class Verdict:
    value: bool | None
    witness: object = None
    window: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.value)


def _window(build: ResolutionBuild) -> dict:
    return {"N": build.window.N, "D": build.window.D, "certified_D": build.certified_D}


def is_closed(closure: ResolutionBuild) -> Verdict:
    """d(R<Y>) lands in m R<Y>: no boundary term has a unit ring coefficient."""
    ext = closure.extension
    one = ext.one_r
    for v in ext.ordered():
        for (m, r), c in v.boundary.items():
            if r == one:
                return Verdict(False, {"variable": v.name, "term": ext.format({(m, r): c})}, _window(closure))
    return Verdict(True, None, _window(closure))


def is_weakly_closed(closure: ResolutionBuild) -> Verdict:
    """d(R<Y>) lands in m R<Y> + (Y)^2: unit-coefficient terms are all decomposable.

    A unit-coefficient term that is not decomposable is a variable or some
    y^(p^i); either one is the witness.
    """
    ext = closure.extension
    one = ext.one_r
    for v in ext.ordered():
        for (m, r), c in sorted(v.boundary.items()):
            if r == one and (not m or not is_decomposable_monomial(ext, m)):
                return Verdict(False, {"variable": v.name, "term": ext.format({(m, r): c})}, _window(closure))
    return Verdict(True, None, _window(closure))


def is_ci(closure: ResolutionBuild) -> Verdict:
    counts = closure.variable_counts()
    bad = [i for i in range(2, len(counts)) if counts[i]]
    return Verdict(not bad, {"degree": bad[0]} if bad else None, _window(closure))


def is_qci(closure: ResolutionBuild) -> Verdict:
    counts = closure.variable_counts()
    bad = [i for i in range(3, len(counts)) if counts[i]]
    return Verdict(not bad, {"degree": bad[0]} if bad else None, _window(closure))


@dataclass
class ClassificationReport:
    closed: Verdict
    weakly_closed: Verdict
    ci: Verdict
    qci: Verdict

    def consistent(self) -> bool:
        ok = True
        if self.closed.value:
            ok = ok and self.weakly_closed.value is True
        if self.ci.value:
            ok = ok and self.qci.value is True
        return ok


def classify(closure: ResolutionBuild) -> ClassificationReport:
    return ClassificationReport(is_closed(closure), is_weakly_closed(closure), is_ci(closure), is_qci(closure))


# -- deviations -------------------------------------------------------------


@dataclass
class DeviationTable:
    eps: dict
    gamma: dict
    eps_predicted: dict
    certified_through: int

    def agree(self) -> bool:
        return all(self.eps.get(i, 0) == self.eps_predicted.get(i, 0) for i in range(2, self.certified_through + 1))

    def mismatches(self) -> list[int]:
        return [i for i in range(2, self.certified_through + 1) if self.eps.get(i, 0) != self.eps_predicted.get(i, 0)]


def deviations_from_counts(counts: list[int]) -> dict:
    """i -> number of variables in degree i-1, for 2 <= i <= N+1."""
    return {i: counts[i - 1] for i in range(2, len(counts) + 1)}


def _split(m: int, p: int):
    """m = j p^t with p not dividing j."""
    t = 0
    while m % p == 0:
        m //= p
        t += 1
    return m, t


def predicted_eps(gamma: dict, p: int, bound: int) -> dict:
    """Deviations from Gamma-deviations via the weakly-closed case formula.

    j is taken prime to p, i.e. the largest admissible t is used.
    """
    g = lambda k: gamma.get(k, 0)  # noqa: E731
    out = {}
    for i in range(2, bound + 1):
        if i % 2 == 1 and i >= 3:
            j, t = _split((i - 1) // 2, p)
            out[i] = sum(g(2 * j * p**s + 1) for s in range(t + 1))
        elif i % 2 == 0 and i >= 4:
            j, t = _split((i - 2) // 2, p)
            out[i] = g(i) + sum(g(2 * j * p**s + 1) for s in range(t))
        else:
            out[i] = g(i)
    return out


def deviations(model: ResolutionBuild, closure: ResolutionBuild) -> DeviationTable:
    bound = min(model.window.N, closure.window.N) + 1
    eps = deviations_from_counts(model.variable_counts())
    gam = deviations_from_counts(closure.variable_counts())
    pred = predicted_eps(gam, closure.extension.p, bound)
    return DeviationTable(
        {i: eps[i] for i in range(2, bound + 1)},
        {i: gam[i] for i in range(2, bound + 1)},
        pred,
        bound,
    )


def _special_indices(p: int, lo: int, hi: int):
    out = []
    t = 1
    while 2 * p**t + 1 <= hi:
        for i in (2 * p**t + 1, 2 * p**t + 2):
            if lo <= i <= hi:
                out.append((t, i))
        t += 1
    return out


def check_cor_ci(closure: ResolutionBuild, table: DeviationTable) -> dict:
    """The three equivalent conditions for a complete intersection, evaluated in the window."""
    p = closure.extension.p
    N = closure.window.N
    eps = table.eps
    c1 = is_ci(closure).value
    upper = list(range(ceil(N / 2) + 1, N + 1))
    c2 = all(eps.get(i, 0) == 0 for i in upper) if upper else None
    special = _special_indices(p, 4, table.certified_through)
    c3 = any(eps.get(i, 0) == 0 for _, i in special) if special else None
    known = [c for c in (c1, c2, c3) if c is not None]
    return {
        "ci": c1,
        "eventually_zero": c2,
        "eventually_zero_range": [upper[0], upper[-1]] if upper else None,
        "zero_at_special_index": c3,
        "special_indices": [i for _, i in special],
        "agree": len(set(known)) <= 1,
        "window": _window(closure),
        "note": "vanishing for i >> 0 is tested on the upper half of the window only",
    }


def check_cor_qci(closure: ResolutionBuild, table: DeviationTable) -> dict:
    """eps_i = eps_3 at i = 2p^t+1, 2p^t+2 (t >= 1) and 0 otherwise, for 4 <= i <= bound."""
    p = closure.extension.p
    bound = table.certified_through
    special = {i for _, i in _special_indices(p, 4, bound)}
    e3 = table.eps.get(3, 0)
    violation = None
    for i in range(4, bound + 1):
        want = e3 if i in special else 0
        if table.eps.get(i, 0) != want:
            violation = {"i": i, "eps": table.eps.get(i, 0), "expected": want}
            break
    qci = is_qci(closure).value
    pattern = violation is None
    return {
        "pattern_holds": pattern,
        "first_violation": violation,
        "qci": qci,
        "agree": pattern == qci,
        "window": _window(closure),
    }


def series_product(counts: list[int], N: int) -> list[int]:
    """Coefficients of prod (1+t^j)^{c_j} (j odd) / (1-t^j)^{c_j} (j even) mod t^(N+1)."""
    s = [0] * (N + 1)
    s[0] = 1
    for j in range(1, min(len(counts), N + 1)):
        for _ in range(counts[j]):
            if j % 2:
                for h in range(N, j - 1, -1):
                    s[h] += s[h - j]
            else:
                for h in range(j, N + 1):
                    s[h] += s[h - j]
    return s


def poincare_check(build: ResolutionBuild) -> dict:
    """Enumerated normal-monomial counts against the product formula in the variable counts."""
    ext = build.extension
    N = build.window.N
    lhs = [len(ext.all_monomials(h)) if h else 1 for h in range(N + 1)]
    rhs = series_product(build.variable_counts(), N)
    return {"ok": lhs == rhs, "enumerated": lhs, "product": rhs, "flavor": build.flavor, "window": _window(build)}
