"""Orthonormalized families ``Psi_n = sum_k c_k g_{k+n}`` and their Gram checks."""

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ShapeMismatch
from .seedfn import DEFAULT_TOL, GaborAtom, UniformGrid, inner_product
from .symbol import CoefficientTable, convolve

NEGLIGIBLE = 1e-14


@dataclass(frozen=True, eq=False)
class SynthesizedFunction:
    """Partial sum over ``max(|k1|, |k2|) <= N`` of ``c_k g_{k + offset}``.

    Coefficients below ``NEGLIGIBLE`` times the largest one are skipped.
    """

    seed: object
    lattice: object
    table: CoefficientTable
    N: int
    offset: tuple = (0, 0)
    _terms: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.table.dims == 1:
            object.__setattr__(self, "table", self.table.embed_2d())
        if self._terms is None:
            t = self.table.truncated(self.N)
            r = t.radius
            # round-off entries (e.g. the k1 != 0 rows of a 1-D symbol) are dropped
            cut = NEGLIGIBLE * np.abs(t.c).max()
            terms = []
            for i in range(-r, r + 1):
                for j in range(-r, r + 1):
                    c = t.c[i + r, j + r]
                    if abs(c) > cut:
                        terms.append((i, j, complex(c)))
            object.__setattr__(self, "_terms", tuple(terms))

    @property
    def terms(self):
        return self._terms

    def atoms(self):
        n1, n2 = self.offset
        return [(c, GaborAtom(self.seed, k1 + n1, k2 + n2, self.lattice))
                for k1, k2, c in self._terms]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for c, atom in self.atoms():
            out += c * atom(x)
        return out

    def shifted(self, n):
        """``Psi_{offset + n}``, built from shifted atoms."""
        return replace(self, offset=(self.offset[0] + n[0], self.offset[1] + n[1]))

    def translated(self, n, x):
        """``T1**n1 T2**n2`` applied to this function, evaluated at ``x``."""
        x = np.asarray(x, dtype=float)
        a = self.lattice.a
        return np.exp(1j * a * n[0] * x) * self(x + a * n[1])

    @property
    def compact(self):
        return self.seed.compact

    @property
    def support(self):
        sups = [atom.support for _, atom in self.atoms()]
        return (min(s[0] for s in sups), max(s[1] for s in sups))

    @property
    def breakpoints(self):
        pts = set()
        for _, atom in self.atoms():
            pts.update(float(p) for p in atom.breakpoints)
        return tuple(sorted(pts))

    @property
    def frequency(self):
        return self.lattice.a * max(abs(k1 + self.offset[0])
                                    for k1, _, _ in self._terms)

    def sample(self, count=2001):
        lo, hi = self.support
        grid = UniformGrid.spanning(lo, hi, count)
        return grid.points, self(grid.points)


def synthesize(seed, lattice, table, N):
    """``Psi_N = sum_{max|k| <= N} c_k g_k`` for a Gabor family."""
    return SynthesizedFunction(seed, lattice, table, N)


@dataclass
class GramReport:
    entries: dict
    method: str
    norm_sq: float = 0.0
    max_offdiag: float = 0.0
    argmax_offdiag: tuple = None

    def __post_init__(self):
        self.norm_sq = float(self.entries.get((0, 0), 0j).real)
        off = {k: abs(v) for k, v in self.entries.items() if k != (0, 0)}
        if off:
            self.argmax_offdiag = max(off, key=off.get)
            self.max_offdiag = float(off[self.argmax_offdiag])

    def to_json(self):
        return {
            "method": self.method,
            "norm_sq": self.norm_sq,
            "max_offdiag": self.max_offdiag,
            "entries": [{"n1": k[0], "n2": k[1], "re": v.real, "im": v.imag}
                        for k, v in sorted(self.entries.items())],
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def gram_report(fn, indices, method):
    """Evaluate ``fn(n1, n2)`` over ``indices`` into a :class:`GramReport`."""
    return GramReport({tuple(n): complex(fn(*n)) for n in indices}, method)


def _profile(table):
    prof = table.row_profile()
    if prof is None:
        raise ShapeMismatch("table depends on k1; expected c_k = delta_{k1,0} c_{k2}")
    return prof, table.radius


def _chat(prof, radius, j):
    return prof[j + radius] if abs(j) <= radius else 0.0


def gram_example1(table, n1, n2, N=None):
    """Closed-form ``<Psi_n, Psi>`` for the width-``3a/2`` rectangle at ``L = 4``,
    where the only nonzero overlaps are ``I_0 = 1`` and ``I_{(0,+-1)} = 1/3``.

    The sum over ``l`` runs over ``[-N, N]`` (``N`` defaults to the table
    radius); coefficients outside the table count as zero.
    """
    prof, r = _profile(table)
    N = r if N is None else N
    if n1 != 0:
        return 0j
    total = 0j
    for l in range(-N, N + 1):
        cl = np.conj(_chat(prof, r, l))
        total += cl * (_chat(prof, r, l + n2)
                       + (_chat(prof, r, l + n2 + 1) + _chat(prof, r, l + n2 - 1)) / 3)
    return complex(total)


def example3_overlap(L, n1):
    """``I_{(n1, +-1)}`` for the cosine window: ``1 / (pi (1 - 4 n1**2 L**2))``."""
    return 1.0 / (math.pi * (1 - 4 * n1 * n1 * L * L))


def gram_example3(table, lattice, n1, n2, N=None):
    """Closed-form ``<Psi_n, Psi>`` for the cosine window of half-width ``a``."""
    prof, r = _profile(table)
    N = r if N is None else N
    kappa = example3_overlap(lattice.L, n1)
    total = 0j
    for l in range(-N, N + 1):
        cl = np.conj(_chat(prof, r, l))
        if n1 == 0:
            total += cl * _chat(prof, r, l + n2)
        total += kappa * cl * (_chat(prof, r, l + n2 + 1) + _chat(prof, r, l + n2 - 1))
    return complex(total)


def _pair_with_overlaps(outer, inner, ov, n1, n2):
    """``sum_k conj(outer_k) sum_k' inner_k' I_{k + n - k'}`` via one
    convolution ``h = inner * I``."""
    h = convolve(inner, ov.values)
    rh = (h.shape[0] - 1) // 2
    ro = (outer.shape[0] - 1) // 2
    idx = np.arange(-ro, ro + 1)
    i1 = idx[:, None] + n1 + rh
    i2 = idx[None, :] + n2 + rh
    ok = (i1 >= 0) & (i1 < h.shape[0]) & (i2 >= 0) & (i2 < h.shape[1])
    vals = np.where(ok, h[np.clip(i1, 0, h.shape[0] - 1), np.clip(i2, 0, h.shape[1] - 1)], 0)
    return complex(np.sum(np.conj(outer) * vals))


def gram_from_overlaps(table, ov, n1, n2, N):
    """``sum conj(c_k) c_k' I_{k + n - k'}`` over the partial-sum coefficients."""
    t = table.embed_2d().truncated(N)
    return _pair_with_overlaps(t.c, t.c, ov, n1, n2)


def gram_truncated(table, ov, n1, n2, N):
    """Gram entry with only the outer sum cut to ``max |k| <= N``:
    ``sum_{|k| <= N} conj(c_k) sum_k' c_k' I_{k + n - k'}``, the other index
    running over the whole table.  For the rectangle at ``L = 4`` this is
    :func:`gram_example1`."""
    t = table.embed_2d()
    return _pair_with_overlaps(t.truncated(N).c, t.c, ov, n1, n2)


def gram_oracle(psi, n1, n2, tol=DEFAULT_TOL):
    """``<T1**n1 T2**n2 Psi_N, Psi_N>`` by direct quadrature in x-space."""
    return inner_product(psi.shifted((n1, n2)), psi, tol)


def apply_XL(table, coeffs_in, invert=False):
    """Coefficient action of ``X_L = sum c_m T**m`` (or of its inverse, whose
    coefficients are ``alpha_hat``).

    ``coeffs_in`` is a centred lattice array describing ``sum_j v_j g_j``; the
    result describes the image, with radius grown by the table radius.
    """
    v = np.asarray(coeffs_in, dtype=complex)
    if table.dims != v.ndim:
        if table.dims == 1 and v.ndim == 2:
            table = table.embed_2d()
        else:
            raise ShapeMismatch(f"{table.dims}-D table applied to {v.ndim}-D input")
    kernel = table.alpha_hat if invert else table.c
    return convolve(kernel, v)
