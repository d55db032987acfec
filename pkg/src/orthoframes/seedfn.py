"""Seed functions, lattice parameters, Gabor atoms and the quadrature-backed
inner product they share.

Inner products are linear in the second argument::

    <f, g> = integral of conj(f(x)) * g(x) dx

and atoms follow ``g_n(x) = exp(i a n1 x) g(x + a n2)``.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .errors import ConfigError

DEFAULT_TOL = 1e-10

#: half-width beyond which the Gaussian vacuum is treated as zero (|g| < 1e-31)
GAUSS_CUTOFF = 12.0


@dataclass(frozen=True)
class UniformGrid:
    start: float
    step: float
    count: int

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("grid step must be positive")
        if self.count < 1:
            raise ValueError("grid count must be positive")

    @property
    def points(self):
        return self.start + self.step * np.arange(self.count)

    @property
    def stop(self):
        return self.start + self.step * (self.count - 1)

    @classmethod
    def spanning(cls, lo, hi, count):
        return cls(lo, (hi - lo) / (count - 1), count)


@dataclass(frozen=True)
class LatticeParams:
    """Lattice with ``a**2 = 2 pi L``; ``A`` is the (k,q)-box frequency step."""

    L: int
    A: float = None

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 1:
            raise ValueError(f"L must be a positive integer, got {self.L!r}")
        if self.A is None:
            object.__setattr__(self, "A", self.a)
        elif not self.A > 0:
            raise ValueError("A must be positive")

    @property
    def a(self):
        return math.sqrt(2 * math.pi * self.L)

    @property
    def b(self):
        return 2 * math.pi * self.L / self.a


class SeedFunction:
    """Base class for square-integrable seeds.

    Subclasses provide ``__call__`` (vectorized), ``support`` (a closed interval
    outside which the function vanishes, possibly only numerically) and
    ``breakpoints`` (points where the function or a derivative is not smooth).
    """

    label = "seed"
    compact = True

    def __call__(self, x):
        raise NotImplementedError

    @property
    def support(self):
        raise NotImplementedError

    @property
    def breakpoints(self):
        return self.support

    def norm_sq(self, tol=DEFAULT_TOL):
        return inner_product(self, self, tol).real


@dataclass(frozen=True)
class Rectangle(SeedFunction):
    """``height`` on the half-open interval ``[lo, hi)``, zero elsewhere."""

    lo: float
    hi: float
    height: float = 1.0
    label: str = "rect"

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError("rectangle needs lo < hi")

    @classmethod
    def centered(cls, center, halfwidth, height=None, label=None):
        """Rectangle on ``[center - halfwidth, center + halfwidth)``; normalized
        to unit L2 norm when ``height`` is omitted."""
        if height is None:
            height = 1.0 / math.sqrt(2 * halfwidth)
        return cls(center - halfwidth, center + halfwidth, height,
                   label or f"rect:{center:g},{halfwidth:g}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.lo) & (x < self.hi), self.height, 0.0)

    @property
    def support(self):
        return (self.lo, self.hi)


@dataclass(frozen=True)
class SmoothBump(SeedFunction):
    """``N_b exp(1/(x**2 - b**2))`` for ``|x| < b``; ``N_b`` is computed so that
    the norm is one."""

    b: float
    normalization: float = field(default=None)
    label: str = "bump"

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("bump half-width must be positive")
        if self.normalization is None:
            raw = quadrature.integrate(lambda x: self._shape(x) ** 2,
                                       (-self.b, 0.0, self.b), tol=1e-15)
            object.__setattr__(self, "normalization", 1.0 / math.sqrt(raw))

    def _shape(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < self.b
        d = np.where(inside, x * x - self.b * self.b, -1.0)
        with np.errstate(over="ignore", under="ignore", divide="ignore"):
            return np.where(inside, np.exp(1.0 / d), 0.0)

    def __call__(self, x):
        return self.normalization * self._shape(x)

    @property
    def support(self):
        return (-self.b, self.b)


@dataclass(frozen=True)
class CosineWindow(SeedFunction):
    """``cos(pi x / 2a) / sqrt(a)`` on ``|x| <= a``."""

    a: float
    label: str = "coswin"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        val = np.cos(np.pi * x / (2 * self.a)) / math.sqrt(self.a)
        return np.where(np.abs(x) <= self.a, val, 0.0)

    @property
    def support(self):
        return (-self.a, self.a)


@dataclass(frozen=True)
class GaussianVacuum(SeedFunction):
    """``pi**(-1/4) exp(-x**2/2)``, the ground state of the harmonic oscillator."""

    label: str = "gauss"
    compact = False

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.pi ** -0.25 * np.exp(-0.5 * x * x)

    @property
    def support(self):
        return (-GAUSS_CUTOFF, GAUSS_CUTOFF)

    @property
    def breakpoints(self):
        return (-GAUSS_CUTOFF, 0.0, GAUSS_CUTOFF)


@dataclass(frozen=True, eq=False)
class Sampled(SeedFunction):
    """Samples on a uniform grid, linearly interpolated, zero outside the grid.

    Linear interpolation is first order only; closed-form seeds should be
    preferred whenever available.
    """

    grid: UniformGrid
    values: np.ndarray
    label: str = "sampled"

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.grid.count,):
            raise ValueError("sample count does not match grid")
        vals = vals.astype(complex if np.iscomplexobj(vals) else float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        pos = (x - self.grid.start) / self.grid.step
        inside = (pos >= 0) & (pos <= self.grid.count - 1)
        i = np.clip(np.floor(pos).astype(int), 0, max(self.grid.count - 2, 0))
        t = pos - i
        v = self.values
        if self.grid.count == 1:
            out = np.where(pos == 0, v[0], 0.0)
        else:
            out = (1 - t) * v[i] + t * v[np.minimum(i + 1, self.grid.count - 1)]
        return np.where(inside, out, 0.0)

    @property
    def support(self):
        return (self.grid.start, self.grid.stop)

    @property
    def breakpoints(self):
        return tuple(self.grid.points)

    @classmethod
    def from_csv(cls, path):
        """Read ``x,re[,im]`` columns (header row required) from a CSV file."""
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        if len(rows) < 3:
            raise ConfigError(f"{path}: need a header row and at least two samples")
        header = [h.strip().lower() for h in rows[0]]
        if header[:2] != ["x", "re"] or len(header) not in (2, 3):
            raise ConfigError(f"{path}:1: header must be x,re[,im], got {rows[0]}")
        try:
            data = np.array([[float(v) for v in r] for r in rows[1:] if r],
                            dtype=float)
        except ValueError as exc:
            raise ConfigError(f"{path}: non-numeric sample ({exc})") from None
        if data.shape[1] != len(header):
            raise ConfigError(f"{path}: rows must have {len(header)} columns")
        x = data[:, 0]
        steps = np.diff(x)
        if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * max(abs(steps[0]), 1.0):
            raise ConfigError(f"{path}: x column must be uniformly increasing")
        vals = data[:, 1] + (1j * data[:, 2] if data.shape[1] == 3 else 0.0)
        return cls(UniformGrid(x[0], float(np.mean(steps)), x.size), vals,
                   label=f"sampled:{path}")


@dataclass(frozen=True)
class Translated(SeedFunction):
    """``x -> exp(i frequency x) seed(x + shift)``."""

    seed: SeedFunction
    shift: float
    frequency: float = 0.0
    label: str = "translated"

    @property
    def compact(self):
        return self.seed.compact

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = self.seed(x + self.shift)
        if self.frequency:
            out = np.exp(1j * self.frequency * x) * out
        return out

    @property
    def support(self):
        lo, hi = self.seed.support
        return (lo - self.shift, hi - self.shift)

    @property
    def breakpoints(self):
        return tuple(np.asarray(self.seed.breakpoints) - self.shift)


@dataclass(frozen=True)
class GaborAtom:
    """``T1**n1 T2**n2 g``, i.e. ``x -> exp(i a n1 x) g(x + a n2)``.

    ``order="T2T1"`` applies the modulation first; with ``a**2 = 2 pi L`` both
    orders describe the same function.
    """

    seed: SeedFunction
    n1: int
    n2: int
    lattice: LatticeParams
    order: str = "T1T2"

    @property
    def compact(self):
        return self.seed.compact

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a = self.lattice.a
        shifted = x + a * self.n2
        if self.order == "T2T1":
            phase = np.exp(1j * a * self.n1 * shifted)
        else:
            phase = np.exp(1j * a * self.n1 * x)
        return phase * self.seed(shifted)

    @property
    def support(self):
        lo, hi = self.seed.support
        s = self.lattice.a * self.n2
        return (lo - s, hi - s)

    @property
    def breakpoints(self):
        s = self.lattice.a * self.n2
        return tuple(np.asarray(self.seed.breakpoints) - s)

    @property
    def frequency(self):
        return self.lattice.a * self.n1

    def norm_sq(self, tol=DEFAULT_TOL):
        return inner_product(self, self, tol).real


def evaluate(f, x):
    """Evaluate a seed or atom at ``x`` (scalar or array), as complex."""
    out = np.asarray(f(x), dtype=complex)
    return out[()] if out.ndim == 0 else out


def _frequency(f):
    return abs(getattr(f, "frequency", 0.0))


def inner_product(f, g, tol=DEFAULT_TOL):
    """``<f, g>`` by adaptive Gauss-Legendre quadrature over the common support.

    Disjoint supports return exactly ``0``. Panels are split at the breakpoints
    of both operands, so piecewise-smooth compact seeds integrate to near
    machine precision.
    """
    flo, fhi = f.support
    glo, ghi = g.support
    lo, hi = max(flo, glo), min(fhi, ghi)
    if lo >= hi:
        return 0j
    pts = [p for p in (*f.breakpoints, *g.breakpoints) if lo < p < hi]
    pts = [lo, *pts, hi]
    omega = _frequency(f) + _frequency(g)
    max_width = min(1.0, 4.0 / omega) if omega else 1.0

    def integrand(x):
        return np.conj(f(x)) * g(x)

    return complex(quadrature.integrate(integrand, pts, tol=tol,
                                        max_width=max_width))


def fourier_transform_grid(f, grid, tol=1e-12, block=256):
    """``(2 pi)**-1/2 * integral of f(x) exp(-i p x) dx`` at every grid point ``p``."""
    p = grid.points
    lo, hi = f.support
    pts = [bp for bp in f.breakpoints if lo <= bp <= hi]
    pmax = float(np.max(np.abs(p))) if p.size else 0.0
    max_width = min(1.0, 4.0 / pmax) if pmax else 1.0
    out = np.empty(p.size, dtype=complex)
    for start in range(0, p.size, block):
        pb = p[start:start + block]

        def integrand(x, pb=pb):
            return f(x)[:, None] * np.exp(-1j * np.outer(x, pb))

        out[start:start + block] = quadrature.integrate(
            integrand, pts, tol=tol, max_width=max_width)
    return out / math.sqrt(2 * math.pi)
