"""Both sides of the Lefschetz formula for PSL2(Z), and geodesic counting.

geometric side   sum_gamma L(gamma) psi(N(gamma))
contour side     (1/2 pi i) int_{C - i inf}^{C + i inf} Z'/Z(s) Mpsi(s) ds
residue side     sum_{s0} ord_{s0}(Z) Mpsi(s0)

The first two agree term by term for the truncated Dirichlet series; the
third needs spectral data and is only as complete as the zero list supplied.
"""

from __future__ import annotations

import math
from dataclasses import asdict

import numpy as np
from scipy import integrate

from . import mellin as mel
from .geodesics import SpectrumCache, default_cache, enumerate_classes, local_lefschetz, log_cutoff
from .quadform import fundamental_unit_below, is_valid_discriminant
from .selberg import TRIVIAL_ZERO, ZeroDatum, _class_arrays, dirichlet_sum, logderiv_tail

H_START = 10.0
H_MAX = 1e5
H_REL_TOL = 1e-3


def _check_X(X: float) -> None:
    if not X > 1:
        raise ValueError(f"need X > 1, got {X}")


def geometric_side(psi: mel.TestFunction, X: float, cache: SpectrumCache | None = None) -> float:
    _check_X(X)
    if mel.is_zero(psi):
        return 0.0
    log_norms, weights = _class_arrays(X, cache)
    if not len(log_norms):
        return 0.0
    return math.fsum(weights * np.asarray(psi(np.exp(log_norms))))


def _contour(psi, C, H, X, cache=None):
    if not 1 < C < psi.decay:
        raise ValueError(f"need 1 < C < {psi.decay}, got C={C}")
    if H < 0:
        raise ValueError(f"need H > 0 (or 0 for adaptive), got H={H}")
    _check_X(X)
    if mel.is_zero(psi):
        return 0.0, H, 0.0
    log_norms, weights = _class_arrays(X, cache)
    panel = min(1.0, 8.0 / math.log(max(X, math.e)))

    def f(h):
        s = C + 1j * h
        return dirichlet_sum(s, log_norms, weights) * mel.mellin(psi, s)

    # conjugate symmetry: (1/2pi) int_{-H}^{H} = (1/pi) Re int_0^H
    if H > 0:
        return mel.line_integral(f, 0.0, H, panel).real / math.pi, H, 0.0
    h_hi = H_START
    total = mel.line_integral(f, 0.0, h_hi, panel).real / math.pi
    while True:
        piece = mel.line_integral(f, h_hi, 10 * h_hi, panel).real / math.pi
        total += piece
        h_hi *= 10
        if abs(piece) <= H_REL_TOL * abs(total) or h_hi >= H_MAX:
            return total, h_hi, abs(piece)


def contour_side(psi: mel.TestFunction, C: float, H: float, X: float,
                 cache: SpectrumCache | None = None) -> float:
    """Vertical-line integral of the truncated Z'/Z times Mpsi; H = 0 picks H
    by decades until the last decade adds < 1e-3 of the running value."""
    return _contour(psi, C, H, X, cache)[0]


def residue_side(psi: mel.TestFunction, zeros: list[ZeroDatum]) -> float:
    total = []
    for z in zeros:
        if not z.s0.real < psi.decay:
            raise mel.DivergentMellin(
                f"Mpsi undefined at zero datum {z.label or z.s0} (Re s0 = {z.s0.real} >= {psi.decay})"
            )
        total.append(z.order * complex(mel.mellin(psi, z.s0)).real)
    return math.fsum(total)


def psi_counting(X: float, cache: SpectrumCache | None = None) -> float:
    """Psi(X) = sum over hyperbolic classes with N(gamma) <= X of log N(gamma0)."""
    _check_X(X)
    return math.fsum(c.multiplicity * c.family.log_norm0 for c in enumerate_classes(X, cache))


def class_number_form(X: float, cache: SpectrumCache | None = None) -> float:
    """Psi(X) rebuilt from order invariants: sum over discriminants D and n >= 1
    with eps_plus(D)^(2n) <= X of 2 h(O_D) R(O_D) per orientation, i.e.
    h_narrow log eps_plus = 2 h_wide R.  No geodesic classes are built."""
    _check_X(X)
    cache = cache if cache is not None else default_cache()
    logX = log_cutoff(X)
    terms = []
    # eps_plus(D)^2 > D, so only D < X can contribute
    for D in range(5, math.ceil(X)):
        if not is_valid_discriminant(D) or fundamental_unit_below(D, 0.5 * logX) is None:
            continue
        rec = cache.record(D)
        log_norm0 = 2.0 * rec.log_eps_plus
        n = 1
        while n * log_norm0 <= logX:
            terms.append(4 * rec.h_wide * rec.log_eps_fund)
            n += 1
    return math.fsum(terms)


def geometric_tail(psi: mel.TestFunction, X: float) -> float:
    """int_X^inf psi(x) dx, the classes beyond X under the density Psi(x) ~ x."""
    if mel.is_zero(psi):
        return 0.0
    # t = X y keeps QUADPACK's infinite-range map well scaled
    val, _ = integrate.quad(lambda y: float(psi(X * y)), 1.0, np.inf, limit=500)
    return X * val


def verification_report(psi: mel.ReferenceTestFunction, C: float, H: float, X: float,
                        zeros: list[ZeroDatum] | None = None,
                        cache: SpectrumCache | None = None) -> dict:
    geometric = geometric_side(psi, X, cache)
    contour, h_used, last_piece = _contour(psi, C, H, X, cache)
    residue = residue_side(psi, zeros if zeros is not None else [TRIVIAL_ZERO])
    rel = abs(contour - geometric) / abs(geometric) if geometric else abs(contour)
    params = asdict(psi) if isinstance(psi, mel.ReferenceTestFunction) else {"generic": True}
    return {
        "psi_params": params,
        "C": C,
        "H": h_used,
        "X": X,
        "geometric": geometric,
        "contour": contour,
        "residue_partial": residue,
        "rel_err_geom_contour": rel,
        "tail_estimates": {
            "geometric_beyond_X": geometric_tail(psi, X),
            "logderiv_on_line": logderiv_tail(C, X),
            "contour_last_decade": last_piece,
        },
    }
