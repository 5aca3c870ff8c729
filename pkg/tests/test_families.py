"""Reference data families: closed forms, determinism, grid transfer."""

import math

import numpy as np
import pytest

from nlslab.families import (chirped_cutoff, gaussian, plane_wave,
                             random_fourier_sum, scale_to_lp,
                             truncated_homogeneous)
from nlslab.grid import GridError, lp_norm, make_grid, smooth_indicator


class TestGaussian:
    def test_lp_norm_closed_form(self):
        # ||A e^{-(x-c)^2/w} e^{imx}||_p = A (pi w / p)^{1/(2p)}
        g = make_grid(2048, 80.0)
        A, w = 0.8, 1.7
        f = gaussian(g, amplitude=A, width=w, center=0.5, momentum=1.2)
        for p in (2.0, 2.5, 3.0):
            exact = A * (math.pi * w / p) ** (1.0 / (2.0 * p))
            assert abs(lp_norm(f, p) - exact) < 1e-12

    def test_center_and_momentum(self):
        g = make_grid(512, 40.0)
        f = gaussian(g, center=2.0, momentum=3.0)
        peak = g.x[np.argmax(np.abs(f.samples))]
        assert abs(peak - 2.0) < g.spacing
        # momentum shifts the spectral peak to xi = 3
        from nlslab.grid import forward_transform
        spec = forward_transform(f)
        xi_peak = g.frequencies[np.argmax(np.abs(spec.samples))]
        assert abs(xi_peak - 3.0) < 2.0 * math.pi / g.length + 1e-12


class TestPlaneWave:
    def test_on_lattice_and_constant_modulus(self):
        g = make_grid(256, 20.0)
        f = plane_wave(g, 0.5 + 0.1j, 7)
        assert np.max(np.abs(np.abs(f.samples) - abs(0.5 + 0.1j))) < 1e-14
        from nlslab.grid import forward_transform
        spec = np.abs(forward_transform(f).samples)
        k_idx = np.argmax(spec)
        assert abs(g.frequencies[k_idx] - 2.0 * math.pi * 7 / 20.0) < 1e-12
        # single lattice line: everything else vanishes
        spec[k_idx] = 0.0
        assert np.max(spec) < 1e-12


class TestChirpedCutoff:
    def test_modulus_is_smooth_indicator(self):
        g = make_grid(1024, 80.0)
        f = chirped_cutoff(g, width=10.0, t0=0.5)
        env = smooth_indicator(g.x, -10.0, 10.0, 1.0)
        assert np.max(np.abs(np.abs(f.samples) - env)) < 1e-14

    def test_phase_matches_focusing_chirp(self):
        g = make_grid(1024, 80.0)
        t0 = 0.7
        f = chirped_cutoff(g, width=10.0, t0=t0)
        inner = np.abs(g.x) < 5.0
        expected = np.exp(-0.25j * g.x ** 2 / t0)
        ratio = f.samples[inner] / expected[inner]
        assert np.max(np.abs(ratio - np.abs(ratio))) < 1e-12  # phase removed

    def test_rejects_bad_t0(self):
        g = make_grid(64, 8.0)
        with pytest.raises(GridError):
            chirped_cutoff(g, width=2.0, t0=0.0)


class TestTruncatedHomogeneous:
    def test_power_law_samples(self):
        g = make_grid(4096, 40.0)
        a = 0.45
        f = truncated_homogeneous(g, a)
        window = (np.abs(g.x) > 0.5) & (np.abs(g.x) < 8.0)  # inside the cut
        expected = np.abs(g.x[window]) ** (-a)
        assert np.max(np.abs(f.samples[window] - expected)) < 1e-12

    def test_center_cell_average(self):
        g = make_grid(4096, 40.0)
        a = 0.45
        f = truncated_homogeneous(g, a)
        center = np.argmin(np.abs(g.x))
        exact = (0.5 * g.spacing) ** (-a) / (1.0 - a)
        assert abs(f.samples[center].real - exact) < 1e-12

    def test_truncation_tail(self):
        g = make_grid(4096, 40.0)
        f = truncated_homogeneous(g, 0.45, cut_fraction=0.3)
        tail = np.abs(g.x) > 0.3 * 40.0 + 5.0
        assert np.max(np.abs(f.samples[tail])) < 1e-8

    def test_rejects_bad_exponent(self):
        g = make_grid(64, 8.0)
        for a in (0.0, 1.0, -0.3, 1.5):
            with pytest.raises(GridError):
                truncated_homogeneous(g, a)


class TestRandomFourierSum:
    def test_deterministic_per_seed(self):
        g = make_grid(256, 40.0)
        a = random_fourier_sum(g, np.random.default_rng(42))
        b = random_fourier_sum(g, np.random.default_rng(42))
        c = random_fourier_sum(g, np.random.default_rng(43))
        assert np.array_equal(a.samples, b.samples)
        assert not np.array_equal(a.samples, c.samples)

    def test_bitwise_grid_transfer(self):
        # refinement and enlargement share lattice points; the continuum
        # field evaluated there must agree bitwise since the draw count
        # is fixed by n_modes alone
        base = 40.0
        coarse = make_grid(256, base)
        fine = make_grid(512, base)
        wide = make_grid(512, 2.0 * base)
        fc = random_fourier_sum(coarse, np.random.default_rng(7),
                                n_modes=17, base_length=base)
        ff = random_fourier_sum(fine, np.random.default_rng(7),
                                n_modes=17, base_length=base)
        fw = random_fourier_sum(wide, np.random.default_rng(7),
                                n_modes=17, base_length=base)
        assert np.array_equal(fc.samples, ff.samples[::2])
        # wide grid: x-lattice of the coarse grid sits at offset n/4
        inner = fw.samples[128:128 + 256]
        assert np.array_equal(fc.samples, inner)

    def test_envelope_decay(self):
        g = make_grid(1024, 80.0)
        f = random_fourier_sum(g, np.random.default_rng(3), base_length=40.0)
        edge = np.abs(g.x) > 30.0
        assert np.max(np.abs(f.samples[edge])) < 1e-10 * np.max(np.abs(f.samples))

    def test_rejects_bad_mode_count(self):
        g = make_grid(64, 8.0)
        with pytest.raises(GridError):
            random_fourier_sum(g, np.random.default_rng(0), n_modes=0)


class TestScaleToLp:
    def test_exact_rescale(self):
        g = make_grid(512, 40.0)
        f = gaussian(g, amplitude=3.7, width=2.2)
        for p, target in ((2.0, 1.0), (2.5, 0.05), (3.0, 12.0)):
            scaled = scale_to_lp(f, p, target)
            assert abs(lp_norm(scaled, p) - target) < 1e-12 * max(target, 1.0)

    def test_rejects_zero_field(self):
        g = make_grid(64, 8.0)
        zero = gaussian(g, amplitude=0.0)
        with pytest.raises(GridError):
            scale_to_lp(zero, 2.0, 1.0)
