"""Hyperbolic conjugacy classes of PSL2(Z), enumerated by norm.

A primitive hyperbolic class of trace t corresponds to the fundamental
automorph (t + f sqrt(D))/2 of a discriminant D = (t^2 - 4)/f^2, and each D
contributes h_narrow(D) primitive classes of norm eps_plus(D)^2.  Norms are
kept in log space throughout.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .quadform import (
    DiscriminantRecord,
    discriminant_record,
    is_valid_discriminant,
    log_unit,
)

CACHE_ENV = "SELBERGLAB_CACHE_DIR"
CACHE_FILE = "spectrum.csv"
CSV_HEADER = ["D", "h_narrow", "h_wide", "x", "y", "unit_norm", "log_eps_fund", "log_eps_plus"]


class SpectrumCache:
    """DiscriminantRecords keyed by D, optionally persisted as CSV.

    With ``directory=None`` the cache lives in memory only.
    """

    def __init__(self, directory: str | os.PathLike | None = None, load: bool = True):
        self.directory = Path(directory) if directory is not None else None
        self._records: dict[int, DiscriminantRecord] = {}
        self.dirty = False
        if load and self.path is not None and self.path.exists():
            with open(self.path, newline="") as fh:
                for rec in read_records(fh):
                    self._records[rec.D] = rec

    @property
    def path(self) -> Path | None:
        return None if self.directory is None else self.directory / CACHE_FILE

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, D: int) -> bool:
        return D in self._records

    def record(self, D: int) -> DiscriminantRecord:
        rec = self._records.get(D)
        if rec is None:
            rec = discriminant_record(D)
            self._records[D] = rec
            self.dirty = True
        return rec

    def records(self) -> list[DiscriminantRecord]:
        return [self._records[D] for D in sorted(self._records)]

    def save(self, overwrite: bool = True) -> Path | None:
        """Write the cache atomically; readers never see a partial file."""
        if self.path is None:
            return None
        if self.path.exists() and not overwrite:
            raise FileExistsError(f"{self.path} exists (overwrite disabled)")
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".spectrum-", suffix=".csv")
        with os.fdopen(fd, "w", newline="") as fh:
            write_records(fh, self.records())
        os.chmod(tmp, 0o644)
        os.replace(tmp, self.path)
        self.dirty = False
        return self.path


_default_cache: SpectrumCache | None = None


def default_cache() -> SpectrumCache:
    global _default_cache
    if _default_cache is None:
        _default_cache = SpectrumCache(os.environ.get(CACHE_ENV) or None)
    return _default_cache


def write_records(fh: io.TextIOBase, records) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in sorted(records, key=lambda r: r.D):
        w.writerow([
            r.D, r.h_narrow, r.h_wide, r.pell_x, r.pell_y, r.unit_norm,
            repr(r.log_eps_fund), repr(r.log_eps_plus),
        ])


def read_records(fh: io.TextIOBase) -> list[DiscriminantRecord]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header != CSV_HEADER:
        raise ValueError(f"bad spectrum cache header: {header!r}")
    out = []
    for lineno, row in enumerate(reader, start=2):
        try:
            D, hn, hw, x, y, un = (int(v) for v in row[:6])
            out.append(DiscriminantRecord(D, hn, hw, x, y, un, float(row[6]), float(row[7])))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"bad spectrum cache row at line {lineno}: {exc}") from None
    return out


@dataclass(frozen=True)
class PrimitiveFamily:
    D: int
    count: int
    log_norm0: float
    trace: int
    f: int = 1

    @property
    def norm0(self) -> float:
        return math.exp(self.log_norm0)


@dataclass(frozen=True)
class GeodesicClass:
    family: PrimitiveFamily
    n: int

    @property
    def log_norm(self) -> float:
        return self.n * self.family.log_norm0

    @property
    def norm(self) -> float:
        return math.exp(self.log_norm)

    @property
    def multiplicity(self) -> int:
        return self.family.count

    @property
    def a_coordinate(self) -> float:
        """t with a_gamma = diag(t, 1/t) in A^-, t = N(gamma)^(-1/2)."""
        return math.exp(-0.5 * self.log_norm)


def _check_X(X: float) -> None:
    if not X > 1:
        raise ValueError(f"need X > 1, got {X}")


def log_cutoff(X: float) -> float:
    """log X widened by a few ulps, so that classes of equal norm (computed
    along different routes) fall on the same side of the bound."""
    logX = math.log(X)
    return logX + 1e-13 * max(1.0, logX)


def _square_cofactors(m: int):
    """Yield (f, m // f^2) for every f >= 1 with f^2 | m."""
    f = 1
    while f * f <= m:
        if m % (f * f) == 0:
            yield f, m // (f * f)
        f += 1


def _trace_log_norm(t: int) -> float:
    # trace t element has eigenvalue (t + sqrt(t^2-4))/2, i.e. the unit with f*sqrt(D) = sqrt(t^2-4)
    return 2.0 * log_unit(t, 1, t * t - 4)


def first_hits(X: float) -> dict[int, tuple[int, int]]:
    """D -> (t, f) for the smallest trace t >= 3 with t^2 - 4 = D f^2,
    over all traces whose norm is at most X."""
    _check_X(X)
    logX = log_cutoff(X)
    hits: dict[int, tuple[int, int]] = {}
    t = 3
    while _trace_log_norm(t) <= logX:
        for f, D in _square_cofactors(t * t - 4):
            if D not in hits and is_valid_discriminant(D):
                hits[D] = (t, f)
        t += 1
    return hits


def enumerate_primitive_families(X: float, cache: SpectrumCache | None = None) -> list[PrimitiveFamily]:
    """One family per discriminant whose primitive norm eps_plus(D)^2 is <= X,
    sorted by norm."""
    cache = cache if cache is not None else default_cache()
    families = []
    for D, (t, f) in first_hits(X).items():
        rec = cache.record(D)
        families.append(PrimitiveFamily(D, rec.h_narrow, 2.0 * log_unit(t, f, D), t, f))
    families.sort(key=lambda fam: (fam.log_norm0, fam.D))
    return families


def enumerate_classes(X: float, cache: SpectrumCache | None = None) -> list[GeodesicClass]:
    """All hyperbolic classes gamma0^n with N(gamma) <= X, one entry per
    (family, n); each entry stands for ``family.count`` conjugacy classes."""
    _check_X(X)
    logX = log_cutoff(X)
    out = []
    for fam in enumerate_primitive_families(X, cache):
        n = 1
        while n * fam.log_norm0 <= logX:
            out.append(GeodesicClass(fam, n))
            n += 1
    out.sort(key=lambda c: (c.log_norm, c.family.D))
    return out


def local_lefschetz(c: GeodesicClass) -> float:
    """L(gamma) = log N(gamma0) / (1 - N(gamma)^-1)."""
    return c.family.log_norm0 / -math.expm1(-c.log_norm)


def h_index(c: GeodesicClass) -> float:
    """Volume of the centralizer quotient: the primitive geodesic length."""
    return c.family.log_norm0
