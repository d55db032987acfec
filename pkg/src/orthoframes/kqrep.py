"""Generalized (k,q)-representation on a discretized box.

``g(k, q) = sqrt(A / 2 pi) * sum_l exp(-i k l A) g(q + l a)`` for
``(k, q)`` in ``[0, 2 pi / A) x [0, a)``.  The map is unitary onto
``L2(box)``, quasi-periodic (``g(k, q + a) = exp(i k A) g(k, q)``) and turns
``T1``, ``T2`` into multiplication by ``exp(i a q)`` and ``exp(i k A)``.

The box is sampled at cell midpoints.  Along ``k`` every quantity used here
is a trigonometric polynomial, so the midpoint sums are exact once
``k_count`` exceeds its degree; along ``q`` the sums are spectrally accurate
for smooth seeds and exact for piecewise-constant ones whose jumps fall on
cell edges.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateProbe, GridMismatch, NonConvergedSum
from .overlaps import OverlapSequence, shell_max

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class KQBox:
    A: float
    a: float
    k_count: int = 256
    q_count: int = 256

    def __post_init__(self):
        if not (self.A > 0 and self.a > 0):
            raise ValueError("A and a must be positive")
        if self.k_count < 16 or self.q_count < 16:
            raise ValueError("grid counts must be at least 16")

    @classmethod
    def for_lattice(cls, lattice, k_count=256, q_count=256):
        return cls(lattice.A, lattice.a, k_count, q_count)

    @property
    def dk(self):
        return 2 * math.pi / (self.A * self.k_count)

    @property
    def dq(self):
        return self.a / self.q_count

    @property
    def k(self):
        return (np.arange(self.k_count) + 0.5) * self.dk

    @property
    def q(self):
        return (np.arange(self.q_count) + 0.5) * self.dq

    @property
    def cell(self):
        return self.dk * self.dq


@dataclass(frozen=True, eq=False)
class KQRepresentation:
    box: KQBox
    values: np.ndarray
    seed_label: str = ""

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.box.k_count, self.box.q_count):
            raise GridMismatch(f"values shape {vals.shape} does not match box")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def norm_sq(self):
        """Discrete ``int int |g(k,q)|**2 dk dq``."""
        return float(np.sum(np.abs(self.values) ** 2) * self.box.cell)

    def shifted_q(self, steps):
        """Values at ``q + steps * dq``, continued by quasi-periodicity."""
        n = self.box.q_count
        wraps, s = divmod(steps, n)
        cols = (np.arange(n) + s)
        over = cols >= n
        out = self.values[:, cols % n].copy()
        phase = np.exp(1j * self.box.k * self.box.A)[:, None]
        out[:, over] *= phase
        if wraps:
            out *= phase ** wraps
        return out

    def summary(self):
        mod = np.abs(self.values)
        return {
            "seed": self.seed_label,
            "A": self.box.A,
            "a": self.box.a,
            "k_count": self.box.k_count,
            "q_count": self.box.q_count,
            "min_modulus": float(mod.min()),
            "max_modulus": float(mod.max()),
            "norm_sq": self.norm_sq(),
        }

    def csv_rows(self):
        k, q = self.box.k, self.box.q
        return [(k[i], q[j], self.values[i, j].real, self.values[i, j].imag)
                for i in range(k.size) for j in range(q.size)]

    def dumps(self):
        return json.dumps(self.summary(), sort_keys=True)


def _l_range(seed, a, q_hi):
    lo, hi = seed.support
    return np.arange(math.floor((lo - q_hi) / a), math.ceil(hi / a) + 1)


def kq_value(seed, A, a, k, q):
    """Pointwise transform at arbitrary ``(k, q)`` (broadcasting arrays)."""
    k, q = np.broadcast_arrays(np.asarray(k, float), np.asarray(q, float))
    out = np.zeros(k.shape, dtype=complex)
    lo, hi = seed.support
    q_min, q_max = float(q.min()), float(q.max())
    ls = np.arange(math.floor((lo - q_max) / a), math.ceil((hi - q_min) / a) + 1)
    for l in ls:
        out += np.exp(-1j * k * l * A) * seed(q + l * a)
    return math.sqrt(A / (2 * math.pi)) * out


def kq_transform(seed, box):
    """Sample ``g(k, q)`` on the midpoint grid of ``box``.

    Raises
    ------
    NonConvergedSum
        If the terms just outside the summed ``l`` range are not negligible.
    """
    ls = _l_range(seed, box.a, box.a)
    q = box.q
    G = np.array([seed(q + l * box.a) for l in ls])
    tail = max(np.abs(seed(q + (ls[0] - 1) * box.a)).max(),
               np.abs(seed(q + (ls[-1] + 1) * box.a)).max())
    if tail > TAIL_TOL:
        raise NonConvergedSum(f"l-sum tail {tail:.2e} exceeds {TAIL_TOL:g}")
    E = np.exp(-1j * np.outer(box.k, ls) * box.A)
    vals = math.sqrt(box.A / (2 * math.pi)) * (E @ G)
    return KQRepresentation(box, vals, getattr(seed, "label", ""))


def kq_overlaps(rep, radius=2):
    """``I_n = int dk exp(-i k n2 A) int dq exp(-i q n1 a) |g(k,q)|**2``."""
    box = rep.box
    w = np.abs(rep.values) ** 2
    n = np.arange(-radius, radius + 1)
    Ek = np.exp(-1j * np.outer(n, box.k) * box.A)      # (n2, k)
    Eq = np.exp(-1j * np.outer(box.q, n) * box.a)      # (q, n1)
    vals = (Ek @ w @ Eq).T * box.cell                  # (n1, n2)
    return OverlapSequence(2, radius, vals, shell_max(vals),
                           f"kq:{rep.seed_label}")


def orthonormality_criterion(rep, L):
    """``max |sum_j |g(k, q + j a/L)|**2 - L A / (2 pi a)|`` over the reduced box.

    Zero exactly when the Gabor family generated at lattice parameter ``L`` is
    orthonormal.

    Raises
    ------
    GridMismatch
        If ``q_count`` is not divisible by ``L``.
    """
    box = rep.box
    if L < 1 or box.q_count % L:
        raise GridMismatch(f"q_count={box.q_count} is not divisible by L={L}")
    w = np.abs(rep.values) ** 2
    folded = w.reshape(box.k_count, L, box.q_count // L).sum(axis=1)
    target = L * box.A / (2 * math.pi * box.a)
    return float(np.abs(folded - target).max())


def criterion_target(box, L):
    return L * box.A / (2 * math.pi * box.a)


def reconstruct(rep, x):
    """Invert the transform: ``g(x) = sqrt(A/2pi) int dk exp(i k l A) g(k, q)``
    with ``x = q + l a``.  Values between q-nodes are linearly interpolated
    (exact at ``x = q_j + l a``)."""
    box = rep.box
    x = np.asarray(x, dtype=float)
    l = np.floor(x / box.a)
    q = x - l * box.a
    pos = q / box.dq - 0.5
    j0 = np.floor(pos).astype(int)
    t = pos - j0
    ext = np.concatenate([rep.shifted_q(-1)[:, :1], rep.values,
                          rep.shifted_q(1)[:, -1:]], axis=1)
    left = ext[:, j0 + 1]
    right = ext[:, j0 + 2]
    col = (1 - t) * left + t * right
    phase = np.exp(1j * np.outer(box.k, l) * box.A)
    vals = np.sum(phase * col, axis=0) * box.dk
    return math.sqrt(box.A / (2 * math.pi)) * vals


def probe_mu(box, s_o):
    """``mu(k, q) = exp(i q a/2) sum_n exp(-i n k A) s_o(q + n a/2)``.

    The exponent sign is fixed so that ``mu(k, q + a/2) = -exp(i k A) mu(k, q)``
    holds with the transform convention used here (``a**2 = 4 pi``).
    """
    half = box.a / 2
    lo, hi = s_o.support
    ns = np.arange(math.floor((lo - box.a) / half) - 1, math.ceil(hi / half) + 2)
    q = box.q
    S = np.array([s_o(q + n * half) for n in ns])
    E = np.exp(-1j * np.outer(box.k, ns) * box.A)
    return np.exp(1j * q * half)[None, :] * (E @ S)


def completeness_probe(rep, s_o, L=2, radius=3):
    """Build ``h(k,q) = conj(g(k, q + a/2)) mu(k, q)`` and return
    ``(max_{|n| <= radius} |<g_n, h>|, ||h||)``.

    A small first entry with a non-negligible norm exhibits a nonzero function
    orthogonal to the whole family, so the family is incomplete in L2(R).

    Raises
    ------
    DegenerateProbe
        If ``||h|| < 1e-8``.
    GridMismatch
        If ``L != 2`` or ``q_count`` is odd.
    """
    box = rep.box
    if L != 2:
        raise GridMismatch("the completeness probe is implemented for L = 2")
    if box.q_count % 2:
        raise GridMismatch("q_count must be even for the half-cell shift")
    mu = probe_mu(box, s_o)
    h = np.conj(rep.shifted_q(box.q_count // 2)) * mu
    h_norm = math.sqrt(float(np.sum(np.abs(h) ** 2) * box.cell))
    if h_norm < 1e-8:
        raise DegenerateProbe(f"probe function has norm {h_norm:.2e}")
    prod = np.conj(rep.values) * h
    n = np.arange(-radius, radius + 1)
    Ek = np.exp(-1j * np.outer(n, box.k) * box.A)
    Eq = np.exp(-1j * np.outer(box.q, n) * box.a)
    pairings = (Ek @ prod @ Eq) * box.cell
    return float(np.abs(pairings).max()), h_norm
