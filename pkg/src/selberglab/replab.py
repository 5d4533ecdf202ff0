"""Admissible dual of PSL2(R), n-cohomology and Lefschetz numbers.

Characters of A are written as complex multiples of rho: the weight s
stands for lambda = s*rho, so a^lambda = t^s at a = diag(t, 1/t).  For
PSL2(R) the Lefschetz number reduces to

    L_lambda(pi) = dim H^1(n, pi_K)^lambda - dim H^0(n, pi_K)^lambda.

The H^0 weight of the finite-dimensional representation delta_{2n-1} is
(2n-2)rho.  This is the only value compatible with the trivial
representation, with left-exactness along 0 -> delta -> pi_{(1-2n)rho}, and
with the Weyl support constraint; the printed (1-2n)rho is not used.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Union


class ReducibleParameter(ValueError):
    pass


def _is_int(z) -> bool:
    z = complex(z)
    return z.imag == 0 and z.real == int(z.real)


@dataclass(frozen=True)
class AWeight:
    s: Number

    def __add__(self, other: "AWeight") -> "AWeight":
        return AWeight(self.s + other.s)

    def __sub__(self, other: "AWeight") -> "AWeight":
        return AWeight(self.s - other.s)

    def __neg__(self) -> "AWeight":
        return AWeight(-self.s)

    def __eq__(self, other) -> bool:
        return isinstance(other, AWeight) and complex(self.s) == complex(other.s)

    def __hash__(self) -> int:
        return hash(complex(self.s))

    def __lt__(self, other: "AWeight") -> bool:
        """nu < mu iff mu - nu is a positive integer multiple of rho."""
        d = complex(other.s) - complex(self.s)
        return _is_int(d) and d.real > 0

    def __repr__(self) -> str:
        return f"{self.s}ρ"


RHO = AWeight(1)


@dataclass(frozen=True)
class PrincipalSeries:
    s: Number

    def is_irreducible(self) -> bool:
        z = complex(self.s)
        return not (_is_int(z) and int(z.real) % 2 == 1)

    def is_unitary(self) -> bool:
        z = complex(self.s)
        return z.real == 0 or (z.imag == 0 and 0 < abs(z.real) < 1)


@dataclass(frozen=True)
class DiscreteSeries:
    n: int
    sign: int = 1

    def __post_init__(self):
        if self.n < 1 or self.sign not in (1, -1):
            raise ValueError(f"bad discrete series parameters n={self.n}, sign={self.sign}")

    def is_irreducible(self) -> bool:
        return True

    def is_unitary(self) -> bool:
        return True


@dataclass(frozen=True)
class FiniteDim:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"bad finite-dimensional parameter n={self.n}")

    @property
    def dimension(self) -> int:
        return 2 * self.n - 1

    def is_irreducible(self) -> bool:
        return True

    def is_unitary(self) -> bool:
        return False


AdmissibleRep = Union[PrincipalSeries, DiscreteSeries, FiniteDim]

# generalized eigenspace dimensions, weight -> dim
CohomologyTable = dict


def infinitesimal_character(rep: AdmissibleRep) -> AWeight:
    if isinstance(rep, PrincipalSeries):
        return AWeight(rep.s)
    return AWeight(2 * rep.n - 1)


def weyl_support(rep: AdmissibleRep) -> frozenset[AWeight]:
    lam = infinitesimal_character(rep)
    return frozenset({lam - RHO, -lam - RHO})


def _require_irreducible(rep: AdmissibleRep) -> None:
    if not rep.is_irreducible():
        raise ReducibleParameter(
            f"{rep} is reducible; use composition_factors({rep.s}) instead"
        )


def h0_principal_series(s: Number) -> CohomologyTable:
    """H^0(n, pi_s) for any parameter, reducible ones included: one-dimensional
    with weight (2k-2)rho exactly when s = 1-2k, k >= 1."""
    z = complex(s)
    if _is_int(z) and z.real <= -1 and int(z.real) % 2 == 1:
        k = (1 - int(z.real)) // 2
        return {AWeight(2 * k - 2): 1}
    return {}


def n_cohomology(rep: AdmissibleRep) -> tuple[CohomologyTable, CohomologyTable]:
    """(H^0, H^1) of the n-cohomology of an irreducible rep."""
    _require_irreducible(rep)
    if isinstance(rep, PrincipalSeries):
        s = rep.s
        if complex(s).real == 0:
            h1: CohomologyTable = {}
            for w in (AWeight(s - 1), AWeight(-s - 1)):
                h1[w] = h1.get(w, 0) + 1
            return {}, h1
        return h0_principal_series(s), {AWeight(s - 1): 1}
    if isinstance(rep, FiniteDim):
        return {AWeight(2 * rep.n - 2): 1}, {AWeight(-2 * rep.n): 1}
    return {}, {AWeight(2 * rep.n - 2): 1}


def lefschetz_number(rep: AdmissibleRep, lam: AWeight) -> int:
    h0, h1 = n_cohomology(rep)
    value = h1.get(lam, 0) - h0.get(lam, 0)
    if value and lam not in weyl_support(rep):
        raise AssertionError(f"L_{lam}({rep}) = {value} outside the Weyl support")
    return value


def composition_factors(s: Number) -> list[AdmissibleRep]:
    z = complex(s)
    if _is_int(z) and int(z.real) % 2 == 1:
        n = (abs(int(z.real)) + 1) // 2
        return [FiniteDim(n), DiscreteSeries(n, 1), DiscreteSeries(n, -1)]
    return [PrincipalSeries(s)]


def principal_series_lefschetz(s: Number, lam: AWeight) -> int:
    """Lefschetz number of pi_s for any s, additive over composition factors."""
    return sum(lefschetz_number(rep, lam) for rep in composition_factors(s))


def rep_label(rep: AdmissibleRep) -> str:
    if isinstance(rep, PrincipalSeries):
        return f"pi[{rep.s}]"
    if isinstance(rep, DiscreteSeries):
        return f"D{'+' if rep.sign > 0 else '-'}[{2 * rep.n}]"
    return f"delta[{2 * rep.n - 1}]"


def lefschetz_table(reps, weights=None) -> list[dict]:
    """Records {rep, lambda, L} for each rep over its Weyl support (or over
    ``weights`` if given), zero entries omitted."""
    out = []
    for rep in reps:
        ws = weights if weights is not None else sorted(
            weyl_support(rep), key=lambda w: (complex(w.s).real, complex(w.s).imag)
        )
        for w in ws:
            L = lefschetz_number(rep, w)
            if L:
                z = complex(w.s)
                out.append({"rep": rep_label(rep), "lambda": [z.real, z.imag], "L": L})
    return out
