"""Exhaustive algebraic checks shared by unit and acceptance tests."""

import numpy as np

from tatemodels.coeffs import binom_mod_p
from tatemodels.dga import DIVIDED, EXTERIOR


def d_squared_failures(ext, emax=None):
    emax = ext.window.D if emax is None else emax
    bad = []
    for h in range(2, ext.window.N + 1):
        for e in range(emax + 1):
            A, B = ext.d_matrix(h - 1, e), ext.d_matrix(h, e)
            if A.size and B.size and np.any(A @ B % ext.p):
                bad.append((h, e))
    return bad


def _monos_upto(ext, hmax):
    return [m for h in range(1, hmax + 1) for m in ext.monomials(h)]


def commutativity_failures(ext, hmax=None):
    hmax = ext.window.N if hmax is None else hmax
    monos = _monos_upto(ext, hmax)
    bad = []
    for i, a in enumerate(monos):
        ha = ext.hdeg_mono(a)
        for b in monos[i:]:
            hb = ext.hdeg_mono(b)
            if ha + hb > ext.window.N or ext.ideg_mono(a) + ext.ideg_mono(b) > ext.window.D:
                continue
            ab = ext.mul(ext.monomial(a), ext.monomial(b))
            ba = ext.mul(ext.monomial(b), ext.monomial(a))
            if ext.add(ab, ba, -((-1) ** (ha * hb))):
                bad.append((a, b))
            if a == b and ha % 2 and ab:
                bad.append((a, a))
    return bad


def leibniz_failures(ext, hmax=None):
    hmax = ext.window.N if hmax is None else hmax
    monos = _monos_upto(ext, hmax)
    bad = []
    for a in monos:
        ha = ext.hdeg_mono(a)
        for b in monos:
            if ha + ext.hdeg_mono(b) > ext.window.N or ext.ideg_mono(a) + ext.ideg_mono(b) > ext.window.D:
                continue
            A, B = ext.monomial(a), ext.monomial(b)
            lhs = ext.d(ext.mul(A, B))
            rhs = ext.add(ext.mul(ext.d(A), B), ext.mul(A, ext.d(B)), (-1) ** ha)
            if ext.add(lhs, rhs, -1):
                bad.append((a, b))
    return bad


def divided_power_failures(ext):
    p, N = ext.p, ext.window.N
    bad = []
    for v in ext.variables:
        if v.kind != DIVIDED:
            continue
        top = N // v.hdeg
        for a in range(1, top + 1):
            ya = ext.var(v.id, a)
            # d(y^(a)) = d(y) y^(a-1)
            want = ext.mul(v.boundary, ext.var(v.id, a - 1))
            if ext.add(ext.d(ya), want, -1):
                bad.append(("leibniz", v.name, a))
            for b in range(1, top - a + 1):
                prod = ext.mul(ya, ext.var(v.id, b))
                want = ext.scale(ext.var(v.id, a + b), binom_mod_p(a + b, a, p))
                if ext.add(prod, want, -1):
                    bad.append(("product", v.name, a, b))
    return bad


def exterior_square_failures(ext):
    return [v.name for v in ext.variables if v.kind == EXTERIOR and 2 * v.hdeg <= ext.window.N and ext.mul(ext.var(v.id), ext.var(v.id))]
