"""Selberg zeta function of PSL2(Z) in the half-plane of convergence.

Z(s) = prod_{gamma0} prod_{k>=0} (1 - N(gamma0)^(-s-k)), truncated to
primitive norms <= X, and its logarithmic derivative as the Dirichlet series
sum_gamma L(gamma) N(gamma)^-s over all hyperbolic classes of norm <= X.
Tail estimates assume the prime geodesic density Psi(x) ~ x and are
heuristic.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geodesics import SpectrumCache, enumerate_classes, enumerate_primitive_families, local_lefschetz

EPS_K = 1e-16


class Truncated(NamedTuple):
    value: complex
    tail: float


def _check_s(s) -> None:
    if not np.min(np.real(s)) > 1:
        raise ValueError(f"the Euler product and Dirichlet series need Re(s) > 1, got {s}")


def default_K(s: complex, log_nmin: float) -> int:
    """Smallest K with N_min^(-Re s - K) < 1e-16."""
    return max(1, math.ceil(-math.log(EPS_K) / log_nmin - complex(s).real) + 1)


def log_zeta(s: complex, X: float, K: int | None = None,
             cache: SpectrumCache | None = None) -> Truncated:
    """log Z(s) over primitive families with N0 <= X and k = 0..K."""
    s = complex(s)
    _check_s(s)
    families = enumerate_primitive_families(X, cache)
    if not families:
        return Truncated(0j, 0.0)
    if K is None:
        K = default_K(s, families[0].log_norm0)
    if K < 1:
        raise ValueError("K must be >= 1")
    total = 0j
    k_tail = 0.0
    ks = np.arange(K + 1)
    for fam in sorted(families, key=lambda f: f.D):
        terms = np.log1p(-np.exp(-(s + ks) * fam.log_norm0))
        total += fam.count * complex(np.sum(terms))
        # |log(1 - x)| <= x / (1 - x), summed geometrically over k > K
        x = math.exp(-(s.real + K + 1) * fam.log_norm0)
        k_tail += fam.count * x / ((1.0 - x) * -math.expm1(-fam.log_norm0))
    sigma, logX = s.real, math.log(X)
    x_tail = X ** (1.0 - sigma) / ((sigma - 1.0) * logX)
    return Truncated(total, x_tail + k_tail)


def _class_arrays(X: float, cache: SpectrumCache | None = None):
    classes = enumerate_classes(X, cache)
    log_norms = np.array([c.log_norm for c in classes])
    weights = np.array([c.multiplicity * local_lefschetz(c) for c in classes])
    return log_norms, weights


def dirichlet_sum(s, log_norms: np.ndarray, weights: np.ndarray):
    """sum_j weights_j exp(-s log_norms_j), vectorized over s."""
    s = np.asarray(s, dtype=complex)
    if not len(log_norms):
        return np.zeros(s.shape, dtype=complex) if s.ndim else 0j
    out = np.exp(-np.multiply.outer(s, log_norms)) @ weights
    return out if np.ndim(out) else complex(out)


def logderiv_tail(s, X: float) -> float:
    sigma = float(np.min(np.real(s)))
    return X ** (1.0 - sigma) / (sigma - 1.0)


def zeta_logderiv(s: complex, X: float, cache: SpectrumCache | None = None) -> Truncated:
    """Z'/Z(s) truncated to classes with N(gamma) <= X."""
    _check_s(s)
    log_norms, weights = _class_arrays(X, cache)
    value = dirichlet_sum(complex(s), log_norms, weights)
    return Truncated(value, logderiv_tail(s, X))


@dataclass(frozen=True)
class ZeroDatum:
    s0: complex
    order: int
    label: str = ""

    def __post_init__(self):
        if self.order == 0:
            raise ValueError("a zero/pole datum needs nonzero order")


TRIVIAL_ZERO = ZeroDatum(1 + 0j, 1, "trivial s=1")


class ZeroDataError(ValueError):
    pass


def load_zero_data(source) -> list[ZeroDatum]:
    """Parse ``re,im,order[,label]`` rows; bytes, str or a file object.

    The simple zero at s = 1 is prepended unless the data already list it.
    Blank lines, ``#`` comments and a leading ``re,im,...`` header are skipped.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    data: list[ZeroDatum] = []
    seen: dict[complex, int] = {}
    for lineno, row in enumerate(csv.reader(io.StringIO(source)), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if lineno == 1 and row[0].strip().lower() == "re":
            continue
        if len(row) < 3 or len(row) > 4:
            raise ZeroDataError(f"line {lineno}: expected re,im,order[,label], got {len(row)} fields")
        try:
            s0 = complex(float(row[0]), float(row[1]))
            order = int(row[2])
            datum = ZeroDatum(s0, order, row[3].strip() if len(row) == 4 else "")
        except ValueError as exc:
            raise ZeroDataError(f"line {lineno}: {exc}") from None
        if s0 in seen:
            raise ZeroDataError(f"line {lineno}: duplicate s0={s0} (first on line {seen[s0]})")
        seen[s0] = lineno
        data.append(datum)
    if TRIVIAL_ZERO.s0 not in seen:
        data.insert(0, TRIVIAL_ZERO)
    return data
