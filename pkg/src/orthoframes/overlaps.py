"""Truncated overlap sequences of translate and Gabor families.

1-D: ``a_j = <f(. + j*step), f>``.  2-D: ``I_n = <g_n, g>`` with
``g_n(x) = exp(i a n1 x) g(x + a n2)``.  Arrays are centred: entry ``j`` lives
at position ``j + radius`` along each axis.
"""

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .seedfn import DEFAULT_TOL, GaussianVacuum, Rectangle, Translated, inner_product

DEFAULT_RADIUS = 8


def thread_count():
    """Worker cap from ``ORTHOFRAMES_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("ORTHOFRAMES_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True, eq=False)
class OverlapSequence:
    dims: int
    radius: int
    values: np.ndarray
    tail_bound: float
    source: str = ""

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (2 * self.radius + 1,) * self.dims:
            raise ValueError(f"values shape {vals.shape} does not match "
                             f"dims={self.dims}, radius={self.radius}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_array(cls, values, source=""):
        values = np.asarray(values, dtype=complex)
        radius = (values.shape[0] - 1) // 2
        return cls(values.ndim, radius, values, shell_max(values), source)

    def __getitem__(self, index):
        idx = (index,) if np.isscalar(index) else tuple(index)
        if len(idx) != self.dims:
            raise IndexError(f"expected {self.dims} indices")
        if any(abs(i) > self.radius for i in idx):
            return 0j
        return complex(self.values[tuple(i + self.radius for i in idx)])

    def indices(self):
        r = range(-self.radius, self.radius + 1)
        if self.dims == 1:
            return [(j,) for j in r]
        return [(i, j) for i in r for j in r]

    def hermitian_defect(self):
        """``max |v(-n) - conj(v(n))|``."""
        flipped = self.values[(slice(None, None, -1),) * self.dims]
        return float(np.max(np.abs(flipped - np.conj(self.values))))

    def csv_rows(self):
        rows = []
        for idx in self.indices():
            v = self[idx]
            if self.dims == 1:
                rows.append((idx[0], 0, v.real, v.imag))
            else:
                rows.append((idx[0], idx[1], v.real, v.imag))
        return rows

    def to_json(self):
        return {
            "dims": self.dims,
            "radius": self.radius,
            "tail_bound": self.tail_bound,
            "source": self.source,
            "entries": [dict(zip(("n1", "n2", "re", "im"), r))
                        for r in self.csv_rows()],
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def shell_max(values):
    """Largest modulus on the outermost max-norm shell of a centred array."""
    values = np.asarray(values)
    r = (values.shape[0] - 1) // 2
    if r == 0:
        return float(np.abs(values).max())
    idx = np.indices(values.shape) - r
    shell = np.max(np.abs(idx), axis=0) == r
    return float(np.abs(values[shell]).max())


def _rect_overlap(seed, shift, omega):
    """Closed form of ``<rect(. + shift) e^{i omega .}, rect>``."""
    lo = max(seed.lo - shift, seed.lo)
    hi = min(seed.hi - shift, seed.hi)
    if lo >= hi:
        return 0j
    h2 = abs(seed.height) ** 2
    if omega == 0:
        return complex(h2 * (hi - lo))
    return complex(h2 * (np.exp(-1j * omega * hi) - np.exp(-1j * omega * lo))
                   / (-1j * omega))


def _disjoint(seed, shift):
    lo, hi = seed.support
    return seed.compact and abs(shift) >= hi - lo


def _overlap(seed, shift, omega, tol, analytic):
    if _disjoint(seed, shift):
        return 0j
    if analytic and isinstance(seed, Rectangle):
        return _rect_overlap(seed, shift, omega)
    return inner_product(Translated(seed, shift, omega), seed, tol)


def translate_overlaps(seed, step=1.0, radius=DEFAULT_RADIUS, tol=DEFAULT_TOL,
                       analytic=True):
    """Overlaps ``a_j = <seed(. + j*step), seed>`` for ``|j| <= radius``.

    Rectangles use the exact interval-intersection formula unless
    ``analytic=False``; everything else goes through quadrature.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    js = range(-radius, radius + 1)
    vals = parallel_map(lambda j: _overlap(seed, j * step, 0.0, tol, analytic), js)
    values = np.array(vals)
    return OverlapSequence(1, radius, values, shell_max(values),
                           f"{seed.label}; step={step:g}")


def gabor_overlaps(seed, lattice, radius=DEFAULT_RADIUS, tol=DEFAULT_TOL,
                   analytic=True):
    """Overlaps ``I_n = <g_n, g>`` on ``[-radius, radius]**2``, computed in x-space.

    Rows with ``|n2| a`` at least the support width are exact zeros for
    compactly supported seeds.  With ``analytic`` the Gaussian vacuum uses
    :func:`coherent_overlaps` (identical to quadrature, sign included).
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    if analytic and isinstance(seed, GaussianVacuum):
        return coherent_overlaps(lattice, radius)
    a = lattice.a
    r = range(-radius, radius + 1)
    idx = [(n1, n2) for n1 in r for n2 in r]
    vals = parallel_map(
        lambda n: _overlap(seed, a * n[1], a * n[0], tol, analytic), idx)
    values = np.array(vals).reshape(2 * radius + 1, 2 * radius + 1)
    return OverlapSequence(2, radius, values, shell_max(values),
                           f"{seed.label}; L={lattice.L}")


def coherent_overlaps(lattice, radius=DEFAULT_RADIUS):
    """Closed form ``(-1)**(L n1 n2) exp(-pi L (n1**2 + n2**2) / 2)``."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    L = lattice.L
    n = np.arange(-radius, radius + 1)
    n1, n2 = np.meshgrid(n, n, indexing="ij")
    sign = np.where((L * n1 * n2) % 2 == 0, 1.0, -1.0)
    values = sign * np.exp(-0.5 * math.pi * L * (n1 ** 2 + n2 ** 2))
    return OverlapSequence(2, radius, values.astype(complex), shell_max(values),
                           f"coherent; L={L}")
