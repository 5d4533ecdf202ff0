"""Test functions on the norm axis, their Mellin transforms and inversion.

A test function psi lives on (0, inf) and vanishes below its support edge.
Its avatar on A^- is phi(diag(t, 1/t)) = psi(t^-2), i.e. psi evaluated at
the norm coordinate, so that phi(a_gamma) = psi(N(gamma)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

import numpy as np
from scipy import integrate

QUAD_TOL = 1e-10


class DivergentMellin(ValueError):
    pass


@dataclass(frozen=True)
class ReferenceTestFunction:
    """psi(t) = (t/T)^-beta (1 - T/t)^k on [T, inf).

    psi is C^(k-1); k >= 2 gives the integrability of psi, psi' t, psi'' t^2
    needed for inversion, smaller k is accepted for testing.
    """

    beta: float
    k: int
    T: float = 1.0

    def __post_init__(self):
        if not self.beta > 0 or self.k < 0 or not self.T > 0:
            raise ValueError(f"bad reference parameters beta={self.beta}, k={self.k}, T={self.T}")

    @property
    def support_lo(self) -> float:
        return self.T

    @property
    def decay(self) -> float:
        return self.beta

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            x = t / self.T
            v = np.where(x >= 1.0, x ** -self.beta * (1.0 - 1.0 / x) ** self.k, 0.0)
        return v if v.ndim else float(v)

    def scaled(self, T: float) -> "ReferenceTestFunction":
        return ReferenceTestFunction(self.beta, self.k, T)


@dataclass(frozen=True)
class GenericTestFunction:
    evaluator: Callable[[float], float]
    support_lo: float = 1.0
    decay_mu: float = math.inf
    smoothness_j: int = 0

    @property
    def decay(self) -> float:
        return self.decay_mu

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        v = np.vectorize(lambda x: float(self.evaluator(x)) if x >= self.support_lo else 0.0,
                         otypes=[float])(t)
        return v if v.ndim else float(v)


TestFunction = Union[ReferenceTestFunction, GenericTestFunction]


def zero_function() -> GenericTestFunction:
    return GenericTestFunction(lambda t: 0.0, 1.0, math.inf, 10**6)


def is_zero(psi: TestFunction) -> bool:
    return isinstance(psi, GenericTestFunction) and psi.decay_mu == math.inf and psi(2.0) == 0.0


def evaluate(psi: TestFunction, t: float) -> float:
    if not t > 0:
        raise ValueError(f"test functions live on t > 0, got {t}")
    return float(psi(t))


def _check_strip(psi: TestFunction, s) -> None:
    re = np.max(np.real(s))
    if not re < psi.decay:
        raise DivergentMellin(f"Mellin integral diverges at Re(s)={re} >= {psi.decay}")


def beta_closed_form(a, m: int):
    """Euler Beta B(a, m) for integer m >= 1: (m-1)! / (a (a+1) ... (a+m-1))."""
    den = np.ones_like(np.asarray(a, dtype=complex))
    for j in range(m):
        den = den * (a + j)
    return math.factorial(m - 1) / den


def mellin_reference(psi: ReferenceTestFunction, s):
    """T^s B(beta - s, k + 1), vectorized over s."""
    s = np.asarray(s, dtype=complex)
    _check_strip(psi, s)
    out = np.exp(s * math.log(psi.T)) * beta_closed_form(psi.beta - s, psi.k + 1)
    return out if out.ndim else complex(out)


def mellin_quadrature(psi: TestFunction, s: complex, tol: float = QUAD_TOL) -> complex:
    """Mpsi(s) by adaptive quadrature in u = log t.

    The oscillating factor exp(i Im(s) u) goes to QUADPACK's Fourier weights.
    """
    s = complex(s)
    _check_strip(psi, s)
    if is_zero(psi):
        return 0j
    u0 = math.log(psi.support_lo)
    sigma, tau = s.real, s.imag

    def g(u):
        # t beyond e^700 is past float range; decay makes it negligible
        if u > 700.0:
            return 0.0
        return math.exp(sigma * u) * float(psi(math.exp(u)))

    opts = dict(epsabs=tol, limit=1000)
    if tau == 0:
        re, _ = integrate.quad(g, u0, np.inf, epsrel=tol, **opts)
        return complex(re, 0.0)
    # shift so QUADPACK's Fourier weight starts at 0, then undo the phase
    w = abs(tau)
    c, _ = integrate.quad(lambda v: g(v + u0), 0.0, np.inf, weight="cos", wvar=w, **opts)
    sn, _ = integrate.quad(lambda v: g(v + u0), 0.0, np.inf, weight="sin", wvar=w, **opts)
    val = complex(c, sn if tau > 0 else -sn)
    return val * complex(math.cos(tau * u0), math.sin(tau * u0))


def mellin(psi: TestFunction, s):
    """Mpsi(s) = int_0^inf t^s psi(t) dt/t, for Re(s) below the decay exponent."""
    if isinstance(psi, ReferenceTestFunction):
        return mellin_reference(psi, s)
    if np.ndim(s):
        return np.array([mellin_quadrature(psi, z) for z in np.ravel(s)]).reshape(np.shape(s))
    return mellin_quadrature(psi, s)


_GL_ORDER = 16
_gl_nodes, _gl_weights = np.polynomial.legendre.leggauss(_GL_ORDER)


def line_integral(f: Callable[[np.ndarray], np.ndarray], h0: float, h1: float,
                  panel: float = 1.0) -> complex:
    """int_{h0}^{h1} f(h) dh by composite Gauss-Legendre; f is vectorized."""
    if h1 <= h0:
        return 0j
    n = max(1, math.ceil((h1 - h0) / panel))
    edges = np.linspace(h0, h1, n + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    h = (mid[:, None] + half[:, None] * _gl_nodes[None, :]).ravel()
    w = (half[:, None] * _gl_weights[None, :]).ravel()
    return complex(np.sum(w * f(h)))


def inverse_mellin(psi: TestFunction, C: float, H: float, t: float) -> float:
    """(1/2pi) int_{-H}^{H} Mpsi(C + ih) t^(-C - ih) dh, real part.

    psi is real, so the integrand is conjugate-symmetric in h and only
    [0, H] is integrated.
    """
    if not C < psi.decay:
        raise DivergentMellin(f"need C < {psi.decay}, got C={C}")
    if not H > 0 or not t > 0:
        raise ValueError(f"need H > 0 and t > 0, got H={H}, t={t}")
    if is_zero(psi):
        return 0.0
    logt = math.log(t)
    panel = min(1.0, 8.0 / max(abs(logt), 1e-300))

    def f(h):
        s = C + 1j * h
        return mellin(psi, s) * np.exp(-s * logt)

    return line_integral(f, 0.0, H, panel).real / math.pi


class Membership(NamedTuple):
    member: bool
    seminorms: dict[int, float]
    diagnostics: dict[int, str]


def class_membership(psi: TestFunction, mu_coeff: float, j: int,
                     per_decade: int = 10_000, decades: int = 6) -> Membership:
    """Estimate N_D(phi) = sup |a^-mu D phi(a)| for D = (t d/dt)^m, m <= j.

    phi(diag(t, 1/t)) = psi(N) with N = t^-2, so a^-mu = N^(mu_coeff/2) and
    t d/dt = -2 d/du in u = log N.  Derivatives are finite differences on a
    geometric grid starting half a decade below the support edge; each is
    computed at two resolutions to separate genuine blow-up (sup grows under
    refinement), jumps (adjacent differences do not shrink) and growth at
    infinity (weighted values still rising over the last decade).
    The result is an estimate, not a certified bound.
    """
    if j < 0:
        raise ValueError("smoothness order must be >= 0")
    u_lo = math.log(psi.support_lo) - 0.5 * math.log(10.0)
    u_hi = math.log(psi.support_lo) + decades * math.log(10.0)
    runs = []
    for res in (per_decade, 2 * per_decade):
        u = np.linspace(u_lo, u_hi, int(round((decades + 0.5) * res)) + 1)
        du = u[1] - u[0]
        g = np.asarray(psi(np.exp(u)), dtype=float)
        weight = np.exp(0.5 * mu_coeff * u)
        derivs = []
        for m in range(j + 1):
            # one-sided differences at the ends are only first-order accurate
            inner = slice(m, len(g) - m)
            derivs.append((weight * g)[inner])
            g = -2.0 * np.gradient(g, du)
        runs.append((u, derivs))

    seminorms: dict[int, float] = {}
    diagnostics: dict[int, str] = {}
    (_, coarse), (u_f, fine) = runs
    for m in range(j + 1):
        gc, gf = np.abs(coarse[m]), np.abs(fine[m])
        u_m = u_f[m : len(u_f) - m]
        last_decade = u_m >= u_hi - math.log(10.0)
        prev_decade = (u_m >= u_hi - 2 * math.log(10.0)) & ~last_decade
        sup_c, sup_f = float(gc.max()), float(gf.max())
        seminorms[m] = sup_f
        if not np.all(np.isfinite(gf)):
            diagnostics[m] = "non-finite values"
            continue
        scale = max(sup_f, 1e-300)
        if sup_f == 0.0:
            continue
        if sup_f > 1.5 * sup_c and sup_f > 1e-12:
            diagnostics[m] = f"sup grows under refinement ({sup_c:.3g} -> {sup_f:.3g})"
            continue
        jump_c = float(np.max(np.abs(np.diff(coarse[m]))))
        jump_f = float(np.max(np.abs(np.diff(fine[m]))))
        if jump_f > 0.75 * jump_c and jump_f > 1e-6 * scale:
            diagnostics[m] = f"derivative jumps by {jump_f:.3g}"
            continue
        end, before = float(gf[last_decade].max()), float(gf[prev_decade].max())
        if before > 0 and end > before * 10 ** 1e-3 and end > 1e-12 * scale:
            diagnostics[m] = f"weighted values grow at infinity (x{end / before:.4g} per decade)"
    return Membership(not diagnostics, seminorms, diagnostics)
