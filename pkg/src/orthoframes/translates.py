"""Frames of integer translates: periodized spectrum, frame bounds and the two
orthonormalizations (coefficient expansion vs. Fourier-domain division).

Fourier convention for the periodized spectrum is the 1-periodic one,
``Phi(p) = sum_k |g1(p + k)|**2`` with ``g1(xi) = int g(x) exp(-2 pi i xi x) dx``
(``= sqrt(2 pi) * ghat(2 pi xi)`` for the unitary ``ghat``).  By Poisson
summation ``Phi(p) = sum_j a_j exp(2 pi i p j)`` with the translate overlaps
``a_j``, i.e. ``Phi(p) = alpha(2 pi p)``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonConvergedSum, NotAFrame, SymbolNotPositive
from .overlaps import translate_overlaps
from .seedfn import (DEFAULT_TOL, Sampled, UniformGrid,
                     fourier_transform_grid, inner_product)
from .symbol import build_symbol, coefficients, evaluate_on_grid

ZERO_SET_THRESHOLD = 1e-8
OVERFLOW_GUARD = 1e12


@dataclass(frozen=True, eq=False)
class PeriodizedSpectrum:
    p: np.ndarray
    values: np.ndarray
    seed_label: str = ""
    zero_set_measure_estimate: float = 0.0
    method: str = "overlaps"

    def csv_rows(self):
        return [(p, v, 0.0) for p, v in zip(self.p, self.values)]


@dataclass(frozen=True)
class FrameBounds:
    A_bound: float
    B_bound: float
    is_frame: bool
    excluded_measure: float = 0.0


def _overlap_radius(seed, tol):
    if seed.compact:
        lo, hi = seed.support
        return max(1, math.ceil(hi - lo))
    r = 4
    while r < 256:
        ov = translate_overlaps(seed, 1.0, r)
        if ov.tail_bound < tol:
            return r
        r *= 2
    raise NonConvergedSum("translate overlaps do not decay")


def periodized_spectrum(seed=None, resolution=4096, method=None, spectrum=None,
                        K=None, tol=DEFAULT_TOL):
    """``Phi`` on ``p_j = j / resolution`` in ``[0, 1)``.

    ``method="overlaps"`` (default for seeds) sums the finite-or-decaying
    Fourier series of overlaps; ``method="direct"`` sums ``|g1(p + k)|**2`` over
    ``|k| <= K``, using ``spectrum`` (a callable ``g1``) when given and numerical
    Fourier transforms of ``seed`` otherwise.

    Raises
    ------
    NonConvergedSum
        If the outermost direct-sum shell still contributes more than ``tol``.
    """
    if method is None:
        method = "direct" if spectrum is not None else "overlaps"
    p = np.arange(resolution) / resolution
    label = getattr(seed, "label", "spectrum")
    if method == "overlaps":
        if seed is None:
            raise ValueError("the overlap route needs a seed function")
        ov = translate_overlaps(seed, 1.0, _overlap_radius(seed, tol), tol)
        vals = evaluate_on_grid(ov.values, resolution).real
    elif method == "direct":
        vals = _direct_sum(seed, spectrum, p, K, tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    if vals.min() < -1e-10:
        raise NotAFrame(f"periodized spectrum negative ({vals.min():.2e})")
    zero = float(np.mean(vals < ZERO_SET_THRESHOLD * max(vals.max(), 0.0)))
    return PeriodizedSpectrum(p, vals, label, zero, method)


def _direct_sum(seed, spectrum, p, K, tol):
    K = 8 if K is None else K
    res = p.size
    if spectrum is None:
        grid = UniformGrid(2 * math.pi * -K, 2 * math.pi / res, (2 * K + 1) * res)
        g1 = math.sqrt(2 * math.pi) * fourier_transform_grid(seed, grid)
        terms = (np.abs(g1) ** 2).reshape(2 * K + 1, res)
    else:
        ks = np.arange(-K, K + 1)
        terms = np.abs(np.asarray(spectrum(p[None, :] + ks[:, None]))) ** 2
    edge = max(terms[0].max(), terms[-1].max())
    if edge > tol:
        raise NonConvergedSum(f"|k|={K} shell contributes {edge:.2e} > {tol:g}")
    return terms.sum(axis=0)


def frame_bounds(spec, floor=1e-12):
    """Bounds ``(A, B)`` of the translate family (``A <= Phi <= B`` off the zero
    set).  Grid points where ``Phi < 1e-8 max(Phi)`` are treated as the zero
    set and excluded.

    Raises
    ------
    NotAFrame
        If ``Phi`` is not finite or exceeds the overflow guard.
    """
    vals = spec.values
    if not np.all(np.isfinite(vals)) or vals.max() > OVERFLOW_GUARD:
        raise NotAFrame("periodized spectrum is unbounded")
    keep = vals >= ZERO_SET_THRESHOLD * vals.max()
    A = float(vals[keep].min()) if keep.any() else 0.0
    B = float(vals.max())
    return FrameBounds(A, B, A > floor, float(1 - keep.mean()))


@dataclass(frozen=True, eq=False)
class TranslateSum:
    """``sum_{|k| <= N} c_k seed(x + (k + offset) step)``."""

    seed: object
    step: float
    c: np.ndarray
    N: int
    offset: int = 0
    label: str = field(default="translate-sum")

    compact = True

    def _terms(self):
        r = (len(self.c) - 1) // 2
        return [(k, self.c[k + r]) for k in range(-min(r, self.N), min(r, self.N) + 1)
                if self.c[k + r] != 0]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for k, c in self._terms():
            out += c * self.seed(x + (k + self.offset) * self.step)
        return out

    def shifted(self, n):
        return TranslateSum(self.seed, self.step, self.c, self.N, self.offset + n,
                            self.label)

    @property
    def support(self):
        lo, hi = self.seed.support
        ks = [k + self.offset for k, _ in self._terms()]
        return (lo - max(ks) * self.step, hi - min(ks) * self.step)

    @property
    def breakpoints(self):
        pts = set()
        for k, _ in self._terms():
            shift = (k + self.offset) * self.step
            pts.update(float(b) - shift for b in self.seed.breakpoints)
        return tuple(sorted(pts))


def orthonormalize_translates(seed, step=1.0, radius=None, N=24, tol=DEFAULT_TOL):
    """Coefficient expansion for the translate family: returns the
    coefficient table and the partial sum ``Psi_N``."""
    radius = radius or max(_overlap_radius(seed, tol) if step == 1.0 else 8, 1)
    ov = translate_overlaps(seed, step, radius, tol)
    table = coefficients(build_symbol(ov), max(N, 1))
    return table, TranslateSum(seed, step, table.c, N)


def translate_gram(psi, n, tol=DEFAULT_TOL):
    """``<Psi(. + n step), Psi>`` by quadrature."""
    return inner_product(psi.shifted(n), psi, tol)


def mra_orthonormalize(seed, samples_per_unit=64, half_window=40):
    """Orthonormal generator by Fourier-domain division,
    ``ghat / sqrt(2 pi sum_l |ghat(. + 2 pi l)|**2)``, on a sampled grid.

    The seed is sampled on ``x_i = i / samples_per_unit`` over
    ``[-half_window, half_window)``; the 2 pi-periodization folds the discrete
    spectrum, so the integer translates of the result are orthonormal for the
    grid inner product ``h * sum conj(u_i) v_i``.

    Raises
    ------
    SymbolNotPositive
        If the periodized spectrum vanishes somewhere.
    """
    M = int(samples_per_unit)
    T = int(half_window)
    n = 2 * T * M
    x = (np.arange(n) - T * M) / M
    X = np.fft.fft(np.asarray(seed(x), dtype=complex))
    S = (np.abs(X) ** 2).reshape(M, 2 * T).sum(axis=0)
    if S.min() <= 1e-12 * S.max():
        raise SymbolNotPositive("periodized spectrum vanishes; not a Riesz basis",
                                value=float(S.min()))
    Y = X * M / np.sqrt(np.tile(S, M))
    vals = np.fft.ifft(Y)
    if np.isrealobj(seed(x[:1])) and np.abs(vals.imag).max() < 1e-12:
        vals = vals.real
    return Sampled(UniformGrid(x[0], 1.0 / M, n), vals,
                   label=f"mra:{getattr(seed, 'label', '')}")


def sampled_translate_gram(phi, n):
    """Grid inner product ``h sum conj(phi(x_i + n)) phi(x_i)`` for an integer
    shift ``n`` of a :class:`Sampled` generator with integer samples per unit."""
    h = phi.grid.step
    m = int(round(1.0 / h))
    v = phi.values
    s = n * m
    if abs(s) >= v.size:
        return 0j
    if s >= 0:
        return complex(h * np.sum(np.conj(v[s:]) * v[:v.size - s]))
    return complex(h * np.sum(np.conj(v[:s]) * v[-s:]))
