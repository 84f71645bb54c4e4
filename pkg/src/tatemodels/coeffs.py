"""Base-p digit arithmetic and the divided-power coefficients.

Everything here works digitwise modulo p (Lucas), so no big integers are
formed on the main path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeP:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")

    def __int__(self):
        return self.p


def _p(p) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


@dataclass(frozen=True)
class BasePExpansion:
    digits: tuple[int, ...]
    p: int

    @property
    def value(self) -> int:
        return sum(d * self.p**i for i, d in enumerate(self.digits))


def base_p_digits(n: int, p) -> list[int]:
    """Digits n_0, n_1, ... of n in base p, least significant first; [] for 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = _p(p)
    out = []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return out


def expansion(n: int, p) -> BasePExpansion:
    p = _p(p)
    return BasePExpansion(tuple(base_p_digits(n, p)), p)


@lru_cache(maxsize=None)
def _small_binom_table(p: int) -> tuple[tuple[int, ...], ...]:
    rows = [[1]]
    for n in range(1, p):
        prev = rows[-1]
        rows.append([1] + [(prev[k - 1] + prev[k]) % p for k in range(1, n)] + [1])
    return tuple(tuple(r) for r in rows)


def binom_mod_p(n: int, m: int, p) -> int:
    """binom(n, m) mod p by Lucas' theorem (zero when m > n)."""
    p = _p(p)
    if m < 0 or n < 0 or m > n:
        return 0
    table = _small_binom_table(p)
    r = 1
    while m:
        n, ni = divmod(n, p)
        m, mi = divmod(m, p)
        if mi > ni:
            return 0
        r = r * table[ni][mi] % p
    return r


def multinomial_mod_p(n: int, parts: Sequence[int], p) -> int:
    """n! / prod(parts!) mod p, as a product of Lucas binomials."""
    if any(k < 0 for k in parts):
        raise ValueError("parts must be nonnegative")
    if sum(parts) != n:
        raise ValueError(f"parts {list(parts)} do not sum to {n}")
    p = _p(p)
    r = 1
    rest = n
    for k in parts:
        r = r * binom_mod_p(rest, k, p) % p
        if not r:
            return 0
        rest -= k
    return r


def coeff_b(t: int, m: int, p) -> int:
    """Coefficient of y^(t p^m) in (y^(p^m))^t."""
    p = _p(p)
    q = p**m
    return multinomial_mod_p(t * q, [q] * t, p)


def coeff_c(n: int, p) -> int:
    """Coefficient of y^(n) in y^(n_0) y^(n_1 p) ... y^(n_l p^l)."""
    p = _p(p)
    parts = [d * p**i for i, d in enumerate(base_p_digits(n, p))]
    return multinomial_mod_p(n, parts, p)


def coeff_d(i: int, p) -> int:
    """The unit d_i with gamma(x_i(y)) = d_i y^(p^i); d_0 = 1."""
    p = _p(p)
    if i < 0:
        raise ValueError("i must be nonnegative")
    if i == 0:
        return 1
    r = coeff_c(p**i - 1, p)
    for j in range(i):
        base = coeff_b(p - 1, j, p) * pow(coeff_c(p**j - 1, p), p - 1, p) % p
        r = r * pow(base, p ** (i - 1 - j), p) % p
    return r


def inv_mod(a: int, p: int) -> int:
    a %= p
    if not a:
        raise ZeroDivisionError("zero has no inverse mod p")
    return pow(a, p - 2, p)
