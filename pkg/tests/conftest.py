from dataclasses import dataclass

import numpy as np
import pytest

from orthoframes.overlaps import OverlapSequence, coherent_overlaps, gabor_overlaps
from orthoframes.reproduce import TABLE_RADIUS, example3_table
from orthoframes.seedfn import (CosineWindow, GaussianVacuum, LatticeParams,
                                Rectangle, SmoothBump)
from orthoframes.symbol import build_symbol, coefficients
from orthoframes.synth import gram_example1, gram_example3, gram_from_overlaps


@dataclass(frozen=True, eq=False)
class Pipeline:
    """One worked example as the library runs it.

    ``symbol_ov`` generates the coefficient table (it may be the approximate
    one-variable sequence); ``gram`` is the analytic Gram entry
    ``(n1, n2, N) -> complex`` over the partial sum with both indices cut.
    """
    name: str
    seed: object
    lattice: LatticeParams
    symbol_ov: OverlapSequence
    table: object
    gram: object


def _pipelines():
    out = []
    lat = LatticeParams(4)
    seed = Rectangle.centered(0.0, 0.75 * lat.a)
    ov = gabor_overlaps(seed, lat, 4)
    table = coefficients(build_symbol(ov), TABLE_RADIUS)
    out.append(Pipeline("ex1-rect-L4", seed, lat, ov, table,
                        lambda n1, n2, N, t=table: gram_example1(t.truncated(N), n1, n2, N)))
    for L in (1, 2, 3):
        lat = LatticeParams(L)
        seed = SmoothBump(0.75 * lat.a)
        ov = gabor_overlaps(seed, lat, 6)
        I01 = ov[(0, 1)].real
        sym_ov = OverlapSequence.from_array(np.array([I01, 1.0, I01]), "approx")
        table = coefficients(build_symbol(sym_ov), TABLE_RADIUS)
        out.append(Pipeline(f"ex2-bump-L{L}", seed, lat, sym_ov, table,
                            lambda n1, n2, N, t=table, ov=ov:
                            gram_from_overlaps(t, ov, n1, n2, N)))
    table = example3_table()
    for L in (1, 2, 3, 4):
        lat = LatticeParams(L)
        out.append(Pipeline(f"ex3-coswin-L{L}", CosineWindow(lat.a), lat,
                            _ex3_sequence(), table,
                            lambda n1, n2, N, t=table, lat=lat:
                            gram_example3(t.truncated(N), lat, n1, n2, N)))
    lat = LatticeParams(2)
    ov = coherent_overlaps(lat, 6)
    table = coefficients(build_symbol(ov), TABLE_RADIUS)
    out.append(Pipeline("coherent-gauss-L2", GaussianVacuum(), lat, ov, table,
                        lambda n1, n2, N, t=table, ov=ov:
                        gram_from_overlaps(t, ov, n1, n2, N)))
    return out


def _ex3_sequence():
    k = 1 / np.pi
    return OverlapSequence.from_array(np.array([k, 1.0, k]), "coswin approx")


PIPELINES = _pipelines()


@pytest.fixture(params=PIPELINES, ids=[p.name for p in PIPELINES])
def pipeline(request):
    return request.param


@pytest.fixture
def lat4():
    return LatticeParams(4)


@pytest.fixture
def rect_ex1(lat4):
    return Rectangle.centered(0.0, 0.75 * lat4.a)
