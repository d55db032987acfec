"""Symbol functions and the Fourier coefficients of their inverse square root.

For an overlap sequence ``I`` the symbol is the trigonometric polynomial
``F(P) = sum_m I_m exp(i P.m)`` on the torus ``[0, 2 pi)**d``.  The
orthonormalizing coefficients are ``c_k = (2 pi)**-d int exp(-i P.k) F**-1/2``
and the inverse-expansion coefficients ``alpha_hat_m`` use ``F**+1/2``.  Both
are taken with the positive square root and computed by the periodic trapezoid
rule (an FFT), which is spectrally accurate for smooth positive symbols.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergedQuadrature, SymbolNotPositive
from .overlaps import OverlapSequence, shell_max

SCAN_RESOLUTION = 4096
COEFF_RESOLUTION_1D = 4096
COEFF_RESOLUTION_2D = 256
MAX_RESOLUTION_1D = 1 << 20
MAX_RESOLUTION_2D = 4096
STABILITY_TOL = 1e-10
POSITIVITY_FLOOR = 1e-6
_ROW_BLOCK = 256


def _wrap(values, M):
    """Place a centred coefficient array into an ``M``-periodic FFT layout."""
    r = (values.shape[0] - 1) // 2
    if 2 * r + 1 > M:
        raise ValueError(f"grid of {M} points cannot hold radius {r}")
    out = np.zeros((M,) * values.ndim, dtype=complex)
    idx = np.arange(-r, r + 1) % M
    out[np.ix_(*([idx] * values.ndim))] = values
    return out


def _unwrap(grid_coeffs, radius):
    M = grid_coeffs.shape[0]
    idx = np.arange(-radius, radius + 1) % M
    return grid_coeffs[np.ix_(*([idx] * grid_coeffs.ndim))]


def evaluate_on_grid(coeffs, M):
    """Complex values of ``sum_m coeffs_m exp(i P.m)`` at ``P_j = 2 pi j / M``."""
    return np.fft.ifftn(_wrap(np.asarray(coeffs), M)) * M ** coeffs.ndim


def _scan(values, M):
    """(min, argmin, max, max |imag|) over the grid, in row blocks for 2-D."""
    if values.ndim == 1:
        F = evaluate_on_grid(values, M)
        j = int(np.argmin(F.real))
        return (float(F.real[j]), (2 * np.pi * j / M,), float(F.real.max()),
                float(np.abs(F.imag).max()))
    r = (values.shape[0] - 1) // 2
    m = np.arange(-r, r + 1)
    P = 2 * np.pi * np.arange(M) / M
    lo, hi, imag, where = np.inf, -np.inf, 0.0, None
    for start in range(0, M, _ROW_BLOCK):
        P1 = P[start:start + _ROW_BLOCK]
        partial = np.exp(1j * np.outer(P1, m)) @ values
        rows = np.fft.ifft(_wrap_rows(partial, M), axis=1) * M
        j = np.unravel_index(np.argmin(rows.real), rows.shape)
        if rows.real[j] < lo:
            lo = float(rows.real[j])
            where = (float(P1[j[0]]), float(P[j[1]]))
        hi = max(hi, float(rows.real.max()))
        imag = max(imag, float(np.abs(rows.imag).max()))
    return lo, where, hi, imag


def _wrap_rows(partial, M):
    r = (partial.shape[1] - 1) // 2
    out = np.zeros((partial.shape[0], M), dtype=complex)
    out[:, np.arange(-r, r + 1) % M] = partial
    return out


@dataclass(frozen=True, eq=False)
class SymbolFunction:
    dims: int
    coeffs: OverlapSequence
    min_value: float
    max_value: float
    grid_resolution: int
    argmin: tuple = None
    max_imag: float = 0.0

    def __call__(self, *P):
        """Evaluate at arbitrary points (one array per dimension)."""
        P = [np.asarray(p, dtype=float) for p in P]
        if len(P) != self.dims:
            raise ValueError(f"expected {self.dims} coordinates")
        r = self.coeffs.radius
        m = np.arange(-r, r + 1)
        vals = self.coeffs.values
        if self.dims == 1:
            out = np.exp(1j * np.multiply.outer(P[0], m)) @ vals
        else:
            e1 = np.exp(1j * np.multiply.outer(P[0], m))
            e2 = np.exp(1j * np.multiply.outer(P[1], m))
            out = np.einsum("...i,ij,...j->...", e1, vals, e2)
        return out

    def on_grid(self, M=None):
        return evaluate_on_grid(self.coeffs.values, M or self.grid_resolution)


def build_symbol(ov, resolution=SCAN_RESOLUTION):
    """Symbol of an overlap sequence, with min/max scanned on a
    ``resolution``-point grid per dimension."""
    lo, where, hi, imag = _scan(ov.values, resolution)
    return SymbolFunction(ov.dims, ov, lo, hi, resolution, where, imag)


def symbol_from_coefficients(values, source="", resolution=SCAN_RESOLUTION):
    return build_symbol(OverlapSequence.from_array(values, source), resolution)


def check_positive(sym, floor=None):
    """Return ``(argmin, min_value)`` if the symbol stays above ``floor``.

    ``floor`` defaults to ``1e-6 * max_value``.

    Raises
    ------
    SymbolNotPositive
        When the grid minimum does not exceed the floor.
    """
    if floor is None:
        floor = POSITIVITY_FLOOR * max(sym.max_value, 0.0)
    if not sym.min_value > floor:
        loc = tuple(round(p, 6) for p in sym.argmin)
        raise SymbolNotPositive(
            f"symbol minimum {sym.min_value:.3e} at P={loc} does not exceed "
            f"floor {floor:.3e}; the symbol has a zero and the "
            f"orthonormalization procedure is inapplicable",
            location=sym.argmin, value=sym.min_value)
    return sym.argmin, sym.min_value


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    dims: int
    radius: int
    c: np.ndarray
    alpha_hat: np.ndarray
    decay_certificate: float
    resolution: int = 0

    def __post_init__(self):
        for name in ("c", "alpha_hat"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.shape != (2 * self.radius + 1,) * self.dims:
                raise ValueError(f"{name} has shape {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_arrays(cls, c, alpha_hat, resolution=0):
        c = np.asarray(c, dtype=complex)
        return cls(c.ndim, (c.shape[0] - 1) // 2, c, alpha_hat, shell_max(c),
                   resolution)

    @classmethod
    def identity(cls, dims=1, radius=1):
        d = np.zeros((2 * radius + 1,) * dims, dtype=complex)
        d[(radius,) * dims] = 1.0
        return cls.from_arrays(d, d)

    def coeff(self, *k):
        return self._lookup(self.c, k)

    def alpha(self, *k):
        return self._lookup(self.alpha_hat, k)

    def _lookup(self, arr, k):
        if len(k) != self.dims:
            raise IndexError(f"expected {self.dims} indices")
        if any(abs(i) > self.radius for i in k):
            return 0j
        return complex(arr[tuple(i + self.radius for i in k)])

    def truncated(self, N):
        """Table restricted to ``max |k| <= N`` (the partial-sum coefficients)."""
        if N >= self.radius:
            return self
        s = (slice(self.radius - N, self.radius + N + 1),) * self.dims
        return CoefficientTable.from_arrays(self.c[s], self.alpha_hat[s],
                                            self.resolution)

    def embed_2d(self):
        """Lift a 1-D table acting along ``T2`` to ``c_k = delta_{k1,0} c_{k2}``."""
        if self.dims == 2:
            return self
        n = 2 * self.radius + 1
        c = np.zeros((n, n), dtype=complex)
        ah = np.zeros((n, n), dtype=complex)
        c[self.radius] = self.c
        ah[self.radius] = self.alpha_hat
        return CoefficientTable(2, self.radius, c, ah, self.decay_certificate,
                                self.resolution)

    def row_profile(self, tol=1e-12):
        """The 1-D profile ``c_{k2}`` of a table of the form
        ``delta_{k1,0} c_{k2}``, or ``None`` if the table has ``k1`` dependence."""
        if self.dims == 1:
            return self.c
        off = np.delete(self.c, self.radius, axis=0)
        if off.size and np.abs(off).max() > tol:
            return None
        return self.c[self.radius]

    def sum_rule(self):
        """``sum_k conj(alpha_hat_k) c_k``; equals one for an exact table."""
        return complex(np.sum(np.conj(self.alpha_hat) * self.c))

    def csv_rows(self):
        r = range(-self.radius, self.radius + 1)
        idx = [(k,) for k in r] if self.dims == 1 else [(i, j) for i in r for j in r]
        rows = []
        for k in idx:
            c, ah = self.coeff(*k), self.alpha(*k)
            rows.append((*k, c.real, c.imag, ah.real, ah.imag))
        return rows

    def csv_header(self):
        ks = ["k1"] if self.dims == 1 else ["k1", "k2"]
        return ks + ["c_re", "c_im", "alphahat_re", "alphahat_im"]


def _trapezoid_coefficients(F, radius):
    M = F.shape[0]
    d = F.ndim
    inv = np.fft.fftn(F ** -0.5) / M ** d
    sq = np.fft.fftn(np.sqrt(F)) / M ** d
    return _unwrap(inv, radius), _unwrap(sq, radius)


def coefficients(sym, radius, resolution=None, floor=None, tol=STABILITY_TOL):
    """Fourier coefficients of ``F**-1/2`` and ``F**+1/2`` on ``|k| <= radius``.

    The trapezoid grid starts at ``resolution`` points per dimension and is
    doubled until every entry moves by at most ``tol``.

    Raises
    ------
    SymbolNotPositive
        If the symbol fails :func:`check_positive`.
    NonConvergedQuadrature
        If the grid limit is reached before the entries stabilise.
    """
    check_positive(sym, floor)
    if resolution is None:
        resolution = COEFF_RESOLUTION_1D if sym.dims == 1 else COEFF_RESOLUTION_2D
    limit = MAX_RESOLUTION_1D if sym.dims == 1 else MAX_RESOLUTION_2D
    M = max(resolution, 4 * (radius + sym.coeffs.radius) + 4)
    prev = None
    while M <= limit:
        F = evaluate_on_grid(sym.coeffs.values, M).real
        if F.min() <= 0:
            raise SymbolNotPositive(
                f"symbol reaches {F.min():.3e} on the {M}-point grid",
                value=float(F.min()))
        c, ah = _trapezoid_coefficients(F, radius)
        if prev is not None:
            change = max(np.abs(c - prev[0]).max(), np.abs(ah - prev[1]).max())
            if change <= tol:
                return CoefficientTable(sym.dims, radius, c, ah, shell_max(c), M)
        prev = (c, ah)
        M *= 2
    raise NonConvergedQuadrature(
        f"coefficients not stable to {tol:g} up to {limit} grid points per axis")


def parseval_sum(table, sym, resolution=None):
    """``(sum |c_k|**2, (2 pi)**-d int F**-1 dP)``; equal when the table captures
    all of ``F**-1/2``."""
    lhs = float(np.sum(np.abs(table.c) ** 2))
    M = resolution or table.resolution or sym.grid_resolution
    F = evaluate_on_grid(sym.coeffs.values, M).real
    return lhs, float(np.mean(1.0 / F))


def convolve(x, y):
    """Full discrete convolution of two centred arrays (result stays centred)."""
    from scipy.signal import fftconvolve, convolve as direct

    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.size * y.size < 1 << 16:
        return direct(x, y, method="direct")
    return fftconvolve(x, y)


def symbol_gram(table, ov):
    """Fourier coefficients of ``F**-1/2 * F**-1/2 * F`` on the overlap radius,
    i.e. the Gram sequence of the orthonormalized family at symbol level."""
    c = table.c if table.dims == ov.dims else table.embed_2d().c
    full = convolve(convolve(c, c), ov.values)
    centre = (full.shape[0] - 1) // 2
    r = ov.radius
    s = (slice(centre - r, centre + r + 1),) * ov.dims
    return full[s]


def shell_maxima(arr):
    """Max modulus on each max-norm shell ``0..radius`` of a centred array."""
    arr = np.asarray(arr)
    r = (arr.shape[0] - 1) // 2
    idx = np.indices(arr.shape) - r
    ring = np.max(np.abs(idx), axis=0)
    return np.array([np.abs(arr[ring == s]).max() for s in range(r + 1)])
