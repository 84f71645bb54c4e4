"""The explicit comparison map from the minimal model onto the acyclic closure.

Given a weakly-closed acyclic closure R<Y>, the minimal model is built
variable by variable: every y in Y gets x_0(y); every even y additionally
gets x_i(y) in degree |y| p^i and x_i'(y) in degree |y| p^i + 1, with

    d x_i(y)  = z~ * x_0(y)^(p-1) ... x_(i-1)(y)^(p-1)
    d x_i'(y) = x_(i-1)(y)^p - p x_i(y)

where z~ is a decomposable cycle lifting d(y). The map sends
x_0(y) -> y, x_i(y) -> d_i y^(p^i) and x_i'(y) -> 0.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .coeffs import coeff_d
from .dga import DIVIDED, EXTERIOR, POLYNOMIAL, SemifreeExtension, indecomposables, linear_part, y_p_infinity
from .resolve import MINIMAL_MODEL, ResolutionBuild, WindowTooSmall, cycles, boundaries, homology_dim


class PreimageMismatch(ValueError):
    pass


class NotWeaklyClosed(RuntimeError):
    pass


class LiftFailure(RuntimeError):
    """No decomposable cycle lifts a boundary; an internal invariant is broken."""


class DgMap:
    """Algebra map between semifree extensions over the same ring, given on variables."""

    def __init__(self, source: SemifreeExtension, target: SemifreeExtension, assignment=None):
        if source.base is not target.base:
            raise ValueError("source and target must share the base ring")
        self.source = source
        self.target = target
        self.assignment: dict = dict(assignment or {})
        self._cache: dict = {}

    def image_of_variable(self, vid: int) -> dict:
        return self.assignment[vid]

    def apply_mono(self, m) -> dict:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        T = self.target
        out = T.one()
        for v, e in m:
            var = self.source.variables[v]
            if var.kind == DIVIDED and e > 1:
                raise NotImplementedError("maps out of divided-power variables are not supported")
            out = T.mul(out, T.power(self.assignment[v], e))
            if not out:
                break
        self._cache[m] = out
        return out

    def apply(self, u: dict) -> dict:
        T = self.target
        out: dict = {}
        for (m, r), c in u.items():
            img = self.apply_mono(m)
            if img:
                out = T.add(out, T.mul_ring(img, {r: c}))
        return out

    def matrix(self, h: int, e: int) -> np.ndarray:
        src, _ = self.source.basis(h, e)
        _, tindex = self.target.basis(h, e)
        M = np.zeros((len(tindex), len(src)), dtype=np.int64)
        for j, (m, r) in enumerate(src):
            img = self.apply_mono(m)
            if not img:
                continue
            for k, c in self.target.mul_ring(img, {r: 1}).items():
                M[tindex[k], j] = c
        return M

    def extend(self, vid: int, image: dict):
        self.assignment[vid] = image
        return self


def extend_map_by_variable(alpha: DgMap, z: dict, b: dict, name=None, hdeg=None, ideg=None):
    """Adjoin x with d(x) = z to the source and send x to b.

    Requires alpha(z) = d(b); returns (alpha, new variable).
    """
    T = alpha.target
    lhs = alpha.apply(z)
    rhs = T.d(b)
    if T.add(lhs, rhs, -1):
        raise PreimageMismatch("alpha(z) differs from d(b)")
    S = alpha.source
    if z:
        h = S.bidegree(z)[0] + 1
    elif b:
        h, e = T.bidegree(b)
        hdeg = h if hdeg is None else hdeg
        ideg = e if ideg is None else ideg
    else:
        h = hdeg
    if h is None:
        raise ValueError("degrees are required when z and b are both zero")
    kind = EXTERIOR if h % 2 else POLYNOMIAL
    var = S.adjoin(kind, z, name=name, hdeg=hdeg, ideg=ideg)
    alpha.extend(var.id, b)
    # the new variable commutes with d by construction; recheck cheaply
    if T.add(alpha.apply(var.boundary), T.d(b), -1):
        raise PreimageMismatch("extension does not commute with the differential")
    return alpha, var


class ComparisonMap(DgMap):
    """gamma: R[X] -> R<Y> together with the family of each model variable."""

    def __init__(self, source, target):
        super().__init__(source, target)
        self.families: dict = {}  # model vid -> (family, closure vid, i)
        self.lifts: dict = {}  # closure vid -> z~
        self.by_family: dict = {}  # (family, closure vid, i) -> model vid

    def register(self, vid, family, y, i):
        self.families[vid] = (family, y, i)
        self.by_family[(family, y, i)] = vid


def _lift(gamma: ComparisonMap, z: dict, h: int, e: int) -> dict:
    """A cycle z~ in m*A + A_+^2 with gamma(z~) = z."""
    model, closure = gamma.source, gamma.target
    p = model.p
    if h == 0:
        return dict(z)
    items, _ = model.basis(h, e)
    n = len(items)
    G = gamma.matrix(h, e)
    Dm = model.d_matrix(h, e)
    one = model.one_r
    lin = [j for j, (m, r) in enumerate(items) if r == one and len(m) == 1 and m[0][1] == 1]
    L = np.zeros((len(lin), n), dtype=np.int64)
    for row, j in enumerate(lin):
        L[row, j] = 1
    A = np.vstack([G, Dm, L])
    rhs = np.concatenate([closure.vector(z, h, e), np.zeros(Dm.shape[0] + len(lin), dtype=np.int64)])
    sol = linalg.solve(A, rhs, p)
    if sol is None:
        raise LiftFailure(f"no decomposable cycle lifts a boundary in bidegree ({h}, {e})")
    return model.element(sol, h, e)


def comparison_from_closure(closure: ResolutionBuild, window=None, check_weakly_closed=True):
    """Build the minimal model from a weakly-closed closure and the map gamma onto it.

    Returns (model build, ComparisonMap).
    """
    from .classify import is_weakly_closed

    if check_weakly_closed:
        wc = is_weakly_closed(closure)
        if not wc.value:
            raise NotWeaklyClosed(f"closure is not weakly closed: {wc.witness}")
    window = closure.window if window is None else window
    N = window.N
    Y = closure.extension
    p = Y.p
    model = SemifreeExtension(Y.base, window)
    gamma = ComparisonMap(model, Y)
    build = ResolutionBuild(model, closure.map, MINIMAL_MODEL, window)

    for y in Y.ordered():
        if y.hdeg > N:
            continue
        if y.ideg > build.certified_D:
            raise WindowTooSmall(f"closure variable {y.name} beyond certified internal degree")
        zt = _lift(gamma, y.boundary, y.hdeg - 1, y.ideg)
        gamma.lifts[y.id] = zt
        kind = EXTERIOR if y.odd else POLYNOMIAL
        x0 = model.adjoin(kind, zt, name=f"x0({y.name})", hdeg=y.hdeg, ideg=y.ideg, check=False)
        gamma.extend(x0.id, Y.var(y.id))
        gamma.register(x0.id, "x", y.id, 0)
        build.adjunction_log.append((x0.id, zt))
        if y.odd:
            continue
        xs = [x0]
        i = 1
        while y.hdeg * p**i <= N:
            deg = y.hdeg * p**i
            bd = zt
            for xj in xs:
                bd = model.mul(bd, model.power(model.var(xj.id), p - 1))
            xi = model.adjoin(POLYNOMIAL, bd, name=f"x{i}({y.name})", hdeg=deg, ideg=y.ideg * p**i, check=False)
            gamma.extend(xi.id, Y.scale(Y.var(y.id, p**i), coeff_d(i, p)))
            gamma.register(xi.id, "x", y.id, i)
            build.adjunction_log.append((xi.id, bd))
            if deg + 1 <= N:
                # d x_i' = x_(i-1)^p - p x_i ; the second term vanishes mod p
                bdp = model.add(model.power(model.var(xs[-1].id), p), model.var(xi.id), -p)
                xp = model.adjoin(EXTERIOR, bdp, name=f"x{i}'({y.name})", hdeg=deg + 1, ideg=y.ideg * p**i, check=False)
                gamma.extend(xp.id, {})
                gamma.register(xp.id, "xprime", y.id, i)
                build.adjunction_log.append((xp.id, bdp))
            xs.append(xi)
            i += 1
    return build, gamma


# -- verification -----------------------------------------------------------


def _window(gamma):
    w = gamma.source.window
    return {"N": w.N, "D": w.D}


def verify_chain_map(gamma: ComparisonMap, cert_D=None) -> dict:
    """gamma(d v) = d gamma(v) on every model variable, plus the formula-level boundaries."""
    X, Y = gamma.source, gamma.target
    p = X.p
    checked = 0
    key_identities = []
    for v in X.ordered():
        if v.hdeg > X.window.N:
            continue
        checked += 1
        lhs = gamma.apply(v.boundary)
        rhs = Y.d(gamma.image_of_variable(v.id))
        if Y.add(lhs, rhs, -1):
            return {"ok": False, "first_failure": v.name, "checked": checked, "window": _window(gamma)}
        fam = gamma.families.get(v.id)
        if fam is None:
            continue
        family, yid, i = fam
        zt = gamma.lifts[yid]
        if family == "x" and i >= 1:
            expect = zt
            for j in range(i):
                expect = X.mul(expect, X.power(X.var(gamma.by_family[("x", yid, j)]), p - 1))
            # gamma(z~ x_0^(p-1)...x_(i-1)^(p-1)) = d_i d(y^(p^i))
            ident = Y.add(gamma.apply(expect), Y.scale(Y.d(Y.var(yid, p**i)), coeff_d(i, p)), -1)
            key_identities.append({"variable": v.name, "ok": not ident})
            if ident:
                return {"ok": False, "first_failure": v.name, "checked": checked, "window": _window(gamma)}
        elif family == "xprime":
            prev = X.var(gamma.by_family[("x", yid, i - 1)])
            cur = X.var(gamma.by_family[("x", yid, i)])
            expect = X.add(X.power(prev, p), X.scale(cur, -p))
        else:
            expect = zt
        if X.add(v.boundary, expect, -1):
            return {"ok": False, "first_failure": v.name, "checked": checked, "window": _window(gamma)}
    return {"ok": True, "first_failure": None, "checked": checked, "key_identities": key_identities, "window": _window(gamma)}


def verify_quasi_iso(gamma: ComparisonMap, cert_D: int) -> dict:
    """Surjectivity in every bidegree and bijectivity on homology for h <= N-1."""
    X, Y = gamma.source, gamma.target
    p = X.p
    N = X.window.N
    failures = []
    for e in range(cert_D + 1):
        for h in range(N + 1):
            G = gamma.matrix(h, e)
            tdim = G.shape[0]
            if linalg.rank(G, p) != tdim:
                failures.append({"h": h, "e": e, "what": "not surjective"})
            if h == N:
                continue
            hs, ht = homology_dim(X, h, e), homology_dim(Y, h, e)
            Zs = cycles(X, h, e)
            Bt = boundaries(Y, h, e)
            images = (G @ Zs.T % p).T if Zs.shape[0] else np.zeros((0, tdim), dtype=np.int64)
            rb = linalg.rank(Bt, p)
            induced = linalg.rank(np.vstack([Bt, images]), p) - rb if tdim else 0
            if not (hs == ht == induced):
                failures.append({"h": h, "e": e, "what": "homology", "source": hs, "target": ht, "induced_rank": induced})
    return {"ok": not failures, "failures": failures, "window": {"N": N, "D": cert_D}}


def _is_extra(gamma, vid) -> bool:
    fam = gamma.families.get(vid)
    return fam is not None and (fam[0] == "xprime" or fam[2] >= 1)


def theorem_A_check(gamma: ComparisonMap) -> dict:
    """dim ind(R[X])_d = #Y_d + dim kY^(p^inf)_d + dim kY^(p^inf)_(d-1), and ker ind(gamma)."""
    X, Y = gamma.source, gamma.target
    p = X.p
    N = X.window.N
    ind_x = indecomposables(X)
    ind_y = indecomposables(Y)
    ypinf = y_p_infinity(Y, N)
    rows = []
    ok = True
    for d in range(1, N + 1):
        xs = ind_x.basis[d]
        ys = [v for v in Y.by_degree(d)]
        yp_d = sum(1 for _, _, deg in ypinf if deg == d)
        yp_dm1 = sum(1 for _, _, deg in ypinf if deg == d - 1)
        # ind(gamma): kX_d -> kY_d
        yidx = {v.id: i for i, v in enumerate(ys)}
        M = np.zeros((len(ys), len(xs)), dtype=np.int64)
        for j, m in enumerate(xs):
            for vid, c in linear_part(Y, gamma.apply_mono(m)).items():
                if vid in yidx:
                    M[yidx[vid], j] = c
        r = linalg.rank(M, p) if M.size else 0
        extra_ids = {m[0][0] for m in xs if _is_extra(gamma, m[0][0])}
        kills = all(not np.any(M[:, j]) for j, m in enumerate(xs) if m[0][0] in extra_ids)
        row = {
            "d": d,
            "ind_model": len(xs),
            "gamma_ind": len(ys),
            "ypinf": yp_d,
            "ypinf_shift": yp_dm1,
            "ind_closure": len(ind_y.basis[d]),
            "identity": len(xs) == len(ys) + yp_d + yp_dm1,
            "closure_sequence": len(ind_y.basis[d]) == len(ys) + yp_d,
            "surjective": r == len(ys),
            "kernel_dim": len(xs) - r,
            "kernel_matches": (len(xs) - r) == len(extra_ids) and kills,
        }
        ok = ok and row["identity"] and row["closure_sequence"] and row["surjective"] and row["kernel_matches"]
        rows.append(row)
    return {"ok": ok, "degrees": rows, "window": _window(gamma)}
