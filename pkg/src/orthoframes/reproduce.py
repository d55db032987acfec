"""Expected-vs-computed tables for the worked examples."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .errors import SymbolNotPositive
from .overlaps import coherent_overlaps, gabor_overlaps, translate_overlaps
from .seedfn import GaussianVacuum, LatticeParams, Rectangle, SmoothBump
from .symbol import build_symbol, coefficients, symbol_from_coefficients
from .synth import (example3_overlap, gram_example3, gram_from_overlaps,
                    gram_truncated)
from .translates import frame_bounds, periodized_spectrum

TABLE_RADIUS = 24


@dataclass
class Row:
    name: str
    expected: float
    computed: float
    tolerance: float

    @property
    def passed(self):
        return bool(abs(self.computed - self.expected) <= self.tolerance)

    def to_json(self):
        return {"name": self.name, "expected": self.expected,
                "computed": self.computed, "tolerance": self.tolerance,
                "pass": self.passed}


@dataclass
class ReproductionReport:
    target: str
    rows: list = field(default_factory=list)

    def add(self, name, expected, computed, tolerance):
        self.rows.append(Row(name, float(expected), float(computed), float(tolerance)))

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    @property
    def expected(self):
        return {r.name: r.expected for r in self.rows}

    @property
    def computed(self):
        return {r.name: r.computed for r in self.rows}

    def row(self, name):
        return next(r for r in self.rows if r.name == name)

    def to_json(self):
        return {"target": self.target, "pass": self.passed,
                "rows": [r.to_json() for r in self.rows]}

    def format(self):
        w = max(len(r.name) for r in self.rows)
        out = [f"{'row':<{w}}  {'expected':>14}  {'computed':>14}  {'tol':>8}  result"]
        for r in self.rows:
            out.append(f"{r.name:<{w}}  {r.expected:>14.8g}  {r.computed:>14.8g}  "
                       f"{r.tolerance:>8.1e}  {'PASS' if r.passed else 'FAIL'}")
        return "\n".join(out)


def _max_offdiag(fn, N):
    best = 0.0
    for n1 in range(-2, 3):
        for n2 in range(-(2 * N + 2), 2 * N + 3):
            if (n1, n2) != (0, 0):
                best = max(best, abs(fn(n1, n2)))
    return best


def translates_report():
    rep = ReproductionReport("translates")
    seed = Rectangle(0.0, 1.5, 1.0, label="rect:[0,3/2)")
    ov = translate_overlaps(seed, 1.0, 2)
    sym = build_symbol(ov)
    table = coefficients(sym, TABLE_RADIUS)
    closed = 2 / math.sqrt(5)
    inv = quadrature.integrate(lambda p: 1.0 / sym(p).real, (0.0, math.pi, 2 * math.pi),
                               tol=1e-14) / (2 * math.pi)
    rep.add("a_0", 1.5, ov[0].real, 1e-12)
    rep.add("a_1", 0.5, ov[1].real, 1e-12)
    rep.add("sum_c2_parseval", closed, float(np.sum(np.abs(table.c) ** 2)), 1e-8)
    rep.add("sum_c2_quadrature", closed, inv, 1e-8)
    fb = frame_bounds(periodized_spectrum(seed, 4096))
    rep.add("frame_A", 0.5, fb.A_bound, 1e-8)
    rep.add("frame_B", 2.5, fb.B_bound, 1e-8)
    return rep


def example1_setup(radius=TABLE_RADIUS):
    lat = LatticeParams(4)
    seed = Rectangle.centered(0.0, 0.75 * lat.a)
    ov = gabor_overlaps(seed, lat, 4)
    table = coefficients(build_symbol(ov), radius)
    return lat, seed, ov, table


def example1_report():
    rep = ReproductionReport("example1")
    _, _, ov, table = example1_setup()
    c = table.row_profile()
    r = table.radius
    ah = table.alpha_hat[r]
    for k, exp, tol in ((0, 1.11308, 1e-4), (1, -0.216769, 1e-5), (2, 0.0625106, 1e-6)):
        rep.add(f"c_{k}", exp, c[r + k].real, tol)
        if k:
            rep.add(f"c_{-k}", exp, c[r - k].real, tol)
    for k, exp, tol in ((0, 0.96857, 1e-4), (1, 0.175095, 1e-5), (2, -0.016400, 1e-5)):
        rep.add(f"alphahat_{k}", exp, ah[r + k].real, tol)
    for N, norm, ntol, off in ((3, 1.00001, 2e-5, 0.00605858), (4, 1.0, 1e-5, 0.00208293)):
        g = lambda n1, n2, N=N: gram_truncated(table, ov, n1, n2, N)
        rep.add(f"norm_sq_N{N}", norm, g(0, 0).real, ntol)
        rep.add(f"max_offdiag_N{N}", off, _max_offdiag(g, N), 1e-6)
    return rep


def example2_setup(L, N=4, radius=6):
    """Bump of half-width ``3a/4``; coefficients from the one-variable
    approximation ``1 + 2 I_(0,1) cos P2``; exact overlaps for the Gram."""
    lat = LatticeParams(L)
    seed = SmoothBump(0.75 * lat.a)
    ov = gabor_overlaps(seed, lat, radius)
    I01 = ov[(0, 1)].real
    sym = symbol_from_coefficients(np.array([I01, 1.0, I01]), f"bump approx; L={L}")
    table = coefficients(sym, TABLE_RADIUS)
    return lat, seed, ov, table.truncated(N)


def example2_report(N=4):
    rep = ReproductionReport("example2")
    grams = {}
    for L in (1, 2, 3):
        _, _, ov, table = example2_setup(L, N)
        grams[L] = lambda n1, n2, ov=ov, t=table: gram_from_overlaps(t, ov, n1, n2, N)
    rep.add("L1_norm_sq", 0.96, grams[1](0, 0).real, 0.02)
    rep.add("L1_overlap_01", 0.1, abs(grams[1](0, 1)), 0.02)
    rep.add("L2_norm_sq", 0.99996, grams[2](0, 0).real, 5e-4)
    rep.add("L2_overlap_10", 0.037, abs(grams[2](1, 0)), 0.005)
    rep.add("L3_overlap_10", 0.012, abs(grams[3](1, 0)), 0.004)
    return rep


def example3_table(radius=TABLE_RADIUS):
    k = example3_overlap(1, 0)
    return coefficients(symbol_from_coefficients(np.array([k, 1.0, k]), "coswin"), radius)


def example3_report(N=4):
    rep = ReproductionReport("example3")
    table = example3_table()
    c = table.c
    r = table.radius
    for k, exp, tol in ((0, 1.0997, 2e-4), (1, -0.20105, 1e-4), (2, 0.0545131, 1e-5)):
        rep.add(f"c_{k}", exp, c[r + k].real, tol)
    for L, exp in ((1, 0.155), (2, 0.031), (3, 0.013), (4, 0.007)):
        val = gram_example3(table, LatticeParams(L), 1, 1, N)
        rep.add(f"L{L}_overlap_11", exp, abs(val), 0.003)
    return rep


def coherent_report():
    rep = ReproductionReport("coherent")
    for L in (1, 2):
        lat = LatticeParams(L)
        sym = build_symbol(coherent_overlaps(lat, 8))
        ratio = sym.min_value / sym(0.0, 0.0).real
        try:
            coefficients(sym, 4)
            aborted = 0.0
        except SymbolNotPositive:
            aborted = 1.0
        if L == 1:
            rep.add("L1_min_ratio", 0.0, ratio, 1e-3)
            rep.add("L1_aborts", 1.0, aborted, 0.0)
        else:
            rep.add("L2_aborts", 0.0, aborted, 0.0)
        quad = gabor_overlaps(GaussianVacuum(), lat, 1, analytic=False)
        for n in ((1, 0), (1, 1)):
            exact = (-1) ** (L * n[0] * n[1]) * math.exp(-0.5 * math.pi * L * (n[0] ** 2 + n[1] ** 2))
            rep.add(f"L{L}_I_{n[0]}{n[1]}", exact, quad[n].real, 1e-10)
    return rep


REPORTS = {
    "translates": translates_report,
    "example1": example1_report,
    "example2": example2_report,
    "example3": example3_report,
    "coherent": coherent_report,
}


def run_reproduce(target):
    return REPORTS[target]()
