"""Real quadratic discriminants: reduced forms, narrow class numbers, Pell units.

Everything here is exact integer arithmetic except the final logarithms,
which are taken from big integers by exponent extraction so that huge
Pell solutions never pass through a machine float.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

ORACLE_BOUND = 5000

_LOG2 = math.log(2.0)


class InvalidDiscriminant(ValueError):
    pass


def is_valid_discriminant(D: int) -> bool:
    if D <= 1 or D % 4 not in (0, 1):
        return False
    r = math.isqrt(D)
    return r * r != D


def _check(D: int) -> None:
    if not isinstance(D, (int, np.integer)) or not is_valid_discriminant(int(D)):
        raise InvalidDiscriminant(f"{D!r} is not a valid discriminant")


def valid_discriminants(lo: int, hi: int) -> list[int]:
    """All D in [lo, hi] with D = 0, 1 mod 4 and D not a square, ascending."""
    if not 0 < lo <= hi:
        raise ValueError(f"need 0 < lo <= hi, got lo={lo}, hi={hi}")
    return [D for D in range(lo, hi + 1) if is_valid_discriminant(D)]


@dataclass(frozen=True)
class QuadraticForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def is_reduced(self) -> bool:
        # |sqrt(D) - 2|a|| < b < sqrt(D), decided with integer comparisons only
        D = self.discriminant
        b, a2 = self.b, 2 * abs(self.a)
        if b <= 0 or b * b >= D:
            return False
        # b > |sqrt(D) - a2|  <=>  sqrt(D) in (a2 - b, a2 + b)
        lo, hi = a2 - b, a2 + b
        return (lo < 0 or lo * lo < D) and D < hi * hi

    def rho(self) -> "QuadraticForm":
        """Reduction operator: (a, b, c) -> (c, b', c') with b' = -b mod 2|c|
        taken in (sqrt(D) - 2|c|, sqrt(D))."""
        D = self.discriminant
        r = math.isqrt(D)
        m = 2 * abs(self.c)
        b1 = r - (r + self.b) % m
        c1 = (b1 * b1 - D) // (4 * self.c)
        return QuadraticForm(self.c, b1, c1)


# smallest-prime-factor table for divisor enumeration, grown on demand
_spf = np.zeros(2, dtype=np.int32)
_SPF_CAP = 1 << 26


def _ensure_spf(n: int) -> bool:
    global _spf
    if n < len(_spf):
        return True
    if n >= _SPF_CAP:
        return False
    size = min(_SPF_CAP, max(n + 1, 2 * len(_spf), 1 << 16))
    spf = np.zeros(size, dtype=np.int32)
    for p in range(2, math.isqrt(size - 1) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx
    _spf = spf
    return True


def _factor(n: int) -> list[tuple[int, int]]:
    out = []
    if _ensure_spf(n):
        spf = _spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in _factor(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return divs


def reduced_forms(D: int) -> list[QuadraticForm]:
    """All reduced primitive forms of discriminant D, sorted."""
    _check(D)
    r = math.isqrt(D)
    forms = []
    for b in range(2 - D % 2, r + 1, 2):
        n = (D - b * b) // 4
        for a in _divisors(n):
            # 2a in (sqrt(D) - b, sqrt(D) + b)
            upper, lower = 2 * a + b, 2 * a - b
            if not (D < upper * upper and (lower < 0 or lower * lower < D)):
                continue
            c = n // a
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append(QuadraticForm(a, b, -c))
            forms.append(QuadraticForm(-a, b, c))
    forms.sort(key=lambda f: (f.a, f.b))
    return forms


def reduction_cycles(D: int) -> list[list[QuadraticForm]]:
    """Partition the reduced forms of discriminant D into rho-cycles."""
    remaining = set(reduced_forms(D))
    cycles = []
    for start in sorted(remaining, key=lambda f: (f.a, f.b)):
        if start not in remaining:
            continue
        cycle = [start]
        remaining.discard(start)
        f = start.rho()
        while f != start:
            cycle.append(f)
            remaining.discard(f)
            f = f.rho()
        cycles.append(cycle)
    return cycles


@lru_cache(maxsize=None)
def narrow_class_number(D: int) -> int:
    return len(reduction_cycles(D))


def oracle_class_count(D: int, bound: int = ORACLE_BOUND) -> int:
    """Count SL2(Z)-classes of primitive forms of discriminant D by brute force.

    Breadth-first closure under x -> x + y and (x, y) -> (-y, x), restricted
    to forms with |a|, |c| <= D.  Seeds are the Lagrange-reduced forms
    |b| <= |a| <= |c|, which meet every class.  Shares no code with the
    cycle method.
    """
    _check(D)
    if D > bound:
        raise ValueError(f"D={D} exceeds the oracle bound {bound}")
    box = D
    seen: set[tuple[int, int, int]] = set()
    classes = 0
    for a0 in range(1, math.isqrt(D) // 2 + 1):
        for b0 in range(-a0 + 1, a0 + 1):
            if (b0 * b0 - D) % (4 * a0):
                continue
            c0 = (b0 * b0 - D) // (4 * a0)
            for seed in ((a0, b0, c0), (-a0, b0, -c0)):
                if seed in seen or math.gcd(math.gcd(seed[0], seed[1]), seed[2]) != 1:
                    continue
                classes += 1
                seen.add(seed)
                queue = deque([seed])
                while queue:
                    a, b, c = queue.popleft()
                    for g in ((a, b + 2 * a, a + b + c), (a, b - 2 * a, a - b + c), (c, -b, a)):
                        if -box <= g[0] <= box and -box <= g[2] <= box and g not in seen:
                            seen.add(g)
                            queue.append(g)
    return classes


def _convergents(D: int):
    """Yield (x, y, norm) for p - q*omega' over the convergents p/q of
    omega = (D mod 2 + sqrt(D))/2, written as (x + y sqrt(D))/2 with
    norm = (x^2 - D y^2)/4.  Units of O_D appear in increasing order."""
    delta = D % 2
    r = math.isqrt(D)
    P, Q = delta, 2
    p0, p1, q0, q1 = 1, 0, 0, 1
    cnorm = (delta * delta - D) // 4  # N(omega)
    while True:
        a = (P + r) // Q
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        P = a * Q - P
        Q = (D - P * P) // Q
        yield 2 * p0 - delta * q0, q0, p0 * p0 - delta * p0 * q0 + cnorm * q0 * q0


def _fundamental(D: int) -> tuple[int, int, int]:
    for x, y, n in _convergents(D):
        if n == 1 or n == -1:
            return x, y, n
    raise AssertionError("unreachable")


def pell4_fundamental(D: int) -> tuple[int, int]:
    """Minimal positive solution of x^2 - D y^2 = 4."""
    _check(D)
    x, y, n = _fundamental(D)
    if n == -1:
        x, y = (x * x + D * y * y) // 2, x * y
    return x, y


def negative_pell_solvable(D: int) -> bool:
    _check(D)
    return _fundamental(D)[2] == -1


def log_bigint(n: int) -> float:
    """log(n) for a positive integer of any size, via its top 64 bits."""
    if n <= 0:
        raise ValueError("log of non-positive integer")
    shift = n.bit_length() - 64
    if shift <= 0:
        return math.log(n)
    return math.log(n >> shift) + shift * _LOG2


def log_unit(x: int, y: int, D: int) -> float:
    """log((x + y sqrt(D))/2) for a solution of x^2 - D y^2 = +-4, x, y > 0."""
    norm = (x * x - D * y * y) // 4
    # y sqrt(D) / x = sqrt(1 - 4 norm / x^2); int true division never overflows
    ratio = math.sqrt(1.0 - 4 * norm / (x * x))
    return log_bigint(x) + math.log1p(ratio) - _LOG2


def fundamental_unit(D: int) -> tuple[float, int]:
    """(log eps0, N(eps0)) for the fundamental unit eps0 > 1 of O_D."""
    _check(D)
    x, y, n = _fundamental(D)
    return log_unit(x, y, D), n


def fundamental_unit_below(D: int, log_bound: float) -> tuple[int, int, int] | None:
    """Fundamental unit (x, y, norm) of O_D if log eps0 <= log_bound, else None.

    Stops the continued fraction as soon as the convergents pass the bound,
    so it costs O(log_bound) steps instead of a full period.
    """
    _check(D)
    # eps0 > y sqrt(D) / 2 bounds y before the unit is found
    ymax = 2.0 * math.exp(log_bound) / math.sqrt(D) + 1.0
    for x, y, n in _convergents(D):
        if y > ymax:
            return None
        if n == 1 or n == -1:
            return (x, y, n) if log_unit(x, y, D) <= log_bound else None


@dataclass(frozen=True)
class DiscriminantRecord:
    D: int
    h_narrow: int
    h_wide: int
    pell_x: int
    pell_y: int
    unit_norm: int
    log_eps_fund: float
    log_eps_plus: float


@lru_cache(maxsize=None)
def discriminant_record(D: int) -> DiscriminantRecord:
    _check(D)
    x, y, n = _fundamental(D)
    log_fund = log_unit(x, y, D)
    h = narrow_class_number(D)
    if n == -1:
        px, py = (x * x + D * y * y) // 2, x * y
        return DiscriminantRecord(D, h, h, px, py, -1, log_fund, 2.0 * log_fund)
    return DiscriminantRecord(D, h, h // 2, x, y, 1, log_fund, log_fund)
