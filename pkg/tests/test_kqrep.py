import json
import math

import numpy as np
import pytest

from orthoframes.errors import DegenerateProbe, GridMismatch, NonConvergedSum
from orthoframes.kqrep import (KQBox, KQRepresentation, completeness_probe,
                               criterion_target, kq_overlaps, kq_transform, kq_value,
                               orthonormality_criterion, probe_mu, reconstruct)
from orthoframes.overlaps import gabor_overlaps
from orthoframes.seedfn import (CosineWindow, GaussianVacuum, LatticeParams, Rectangle,
                                SmoothBump)


def test_box_validation():
    with pytest.raises(ValueError):
        KQBox(1.0, 1.0, 8, 32)
    with pytest.raises(ValueError):
        KQBox(0.0, 1.0)
    box = KQBox(2.0, 3.0, 16, 32)
    assert box.k[0] == pytest.approx(box.dk / 2)
    assert box.q[-1] == pytest.approx(3.0 - box.dq / 2)


def test_values_shape_checked():
    with pytest.raises(GridMismatch):
        KQRepresentation(KQBox(1.0, 1.0, 16, 16), np.zeros((16, 17)))


def test_transform_matches_pointwise_sum():
    lat = LatticeParams(2)
    g = SmoothBump(0.75 * lat.a)
    box = KQBox.for_lattice(lat, 32, 32)
    rep = kq_transform(g, box)
    K, Q = np.meshgrid(box.k, box.q, indexing="ij")
    np.testing.assert_allclose(rep.values, kq_value(g, lat.A, lat.a, K, Q), atol=1e-14)


def test_quasi_periodicity():
    lat = LatticeParams(1)
    g = GaussianVacuum()
    k = np.linspace(0.1, 2.0, 5)
    q = np.full(5, 0.3)
    lhs = kq_value(g, lat.A, lat.a, k, q + lat.a)
    rhs = np.exp(1j * k * lat.A) * kq_value(g, lat.A, lat.a, k, q)
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_translations_become_phases():
    lat = LatticeParams(2)
    g = GaussianVacuum()
    k, q = 0.37, 0.81
    from orthoframes.seedfn import GaborAtom
    at = GaborAtom(g, 1, 2, lat)
    lhs = kq_value(at, lat.A, lat.a, k, q)
    rhs = np.exp(1j * lat.a * q) * np.exp(1j * k * lat.A * 2) * kq_value(g, lat.A, lat.a, k, q)
    assert lhs == pytest.approx(rhs, abs=1e-12)


@pytest.mark.parametrize("seed_fn", [lambda a: GaussianVacuum(), lambda a: SmoothBump(0.75 * a),
                                     lambda a: CosineWindow(a),
                                     lambda a: Rectangle.centered(0, 0.75 * a)])
def test_parseval(seed_fn):
    lat = LatticeParams(2)
    rep = kq_transform(seed_fn(lat.a), KQBox.for_lattice(lat))
    assert rep.norm_sq() == pytest.approx(1.0, abs=1e-6)


def test_overlap_normalization():
    lat = LatticeParams(3)
    g = GaussianVacuum()
    ov = kq_overlaps(kq_transform(g, KQBox.for_lattice(lat)), 2)
    assert ov[(0, 0)] == pytest.approx(1.0, abs=1e-12)
    x_ov = gabor_overlaps(g, lat, 2)
    np.testing.assert_allclose(ov.values, x_ov.values, atol=1e-10)


def test_criterion_rectangle_and_gaussian():
    lat = LatticeParams(1)
    rect = Rectangle(0.0, lat.a, 1 / math.sqrt(lat.a))
    box = KQBox.for_lattice(lat)
    assert orthonormality_criterion(kq_transform(rect, box), 1) < 1e-10
    r = orthonormality_criterion(kq_transform(GaussianVacuum(), box), 1)
    assert r > 0.1
    assert criterion_target(box, 1) == pytest.approx(1 / (2 * math.pi))
    with pytest.raises(GridMismatch):
        orthonormality_criterion(kq_transform(rect, KQBox.for_lattice(lat, 16, 30)), 4)


def test_criterion_unit_rectangle_at_L2():
    # the indicator of [0, a/2) normalized has orthonormal Gabor atoms at L = 2
    lat = LatticeParams(2)
    rect = Rectangle(0.0, lat.a / 2, 1 / math.sqrt(lat.a / 2))
    assert orthonormality_criterion(kq_transform(rect, KQBox.for_lattice(lat)), 2) < 1e-10
    ov = gabor_overlaps(rect, lat, 2)
    delta = np.zeros((5, 5))
    delta[2, 2] = 1
    np.testing.assert_allclose(ov.values, delta, atol=1e-12)


def test_reconstruction_on_nodes():
    lat = LatticeParams(2)
    g = SmoothBump(0.75 * lat.a)
    box = KQBox.for_lattice(lat, 64, 64)
    rep = kq_transform(g, box)
    x = np.concatenate([box.q + l * box.a for l in (-1, 0)])
    np.testing.assert_allclose(reconstruct(rep, x), g(x), atol=1e-12)
    xm = np.linspace(-2.5, 2.5, 11)
    np.testing.assert_allclose(reconstruct(rep, xm), g(xm), atol=5e-3)


def test_shifted_q_uses_quasi_periodicity():
    lat = LatticeParams(1)
    box = KQBox.for_lattice(lat, 16, 16)
    g = GaussianVacuum()
    rep = kq_transform(g, box)
    K, Q = np.meshgrid(box.k, box.q + 5 * box.dq, indexing="ij")
    np.testing.assert_allclose(rep.shifted_q(5), kq_value(g, lat.A, lat.a, K, Q), atol=1e-13)
    K, Q = np.meshgrid(box.k, box.q + 21 * box.dq, indexing="ij")
    np.testing.assert_allclose(rep.shifted_q(21), kq_value(g, lat.A, lat.a, K, Q), atol=1e-13)


def test_probe_mu_half_shift():
    lat = LatticeParams(2)
    box = KQBox.for_lattice(lat, 32, 32)
    s_o = GaussianVacuum()
    mu = probe_mu(box, s_o)
    half = box.a / 2
    q = box.q[:16]
    n = np.arange(-12, 13)
    shifted = np.exp(1j * (q + half) * half)[None, :] * (
        np.exp(-1j * np.outer(box.k, n) * box.A) @ np.array([s_o(q + half + m * half) for m in n]))
    np.testing.assert_allclose(shifted, -np.exp(1j * box.k * box.A)[:, None] * mu[:, :16],
                               atol=1e-12)


def test_completeness_probe():
    lat = LatticeParams(2)
    rep = kq_transform(GaussianVacuum(), KQBox.for_lattice(lat))
    res, norm = completeness_probe(rep, GaussianVacuum(), 2)
    assert res < 1e-6 and norm > 0.1
    with pytest.raises(GridMismatch):
        completeness_probe(rep, GaussianVacuum(), 3)


def test_degenerate_probe():
    lat = LatticeParams(2)
    rep = kq_transform(GaussianVacuum(), KQBox.for_lattice(lat, 32, 32))
    tiny = Rectangle(0.0, 1.0, 0.0)
    with pytest.raises(DegenerateProbe):
        completeness_probe(rep, tiny, 2)


def test_tail_check():
    class Wide(GaussianVacuum):
        @property
        def support(self):
            return (-1.0, 1.0)

    lat = LatticeParams(1)
    with pytest.raises(NonConvergedSum):
        kq_transform(Wide(), KQBox.for_lattice(lat, 16, 16))


def test_summary_json():
    lat = LatticeParams(1)
    rep = kq_transform(GaussianVacuum(), KQBox.for_lattice(lat, 16, 16))
    data = json.loads(rep.dumps())
    assert data["k_count"] == 16 and data["norm_sq"] == pytest.approx(1.0)
    assert len(rep.csv_rows()) == 256
