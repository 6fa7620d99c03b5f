import math

import numpy as np
import pytest

from gammacap.quadrature import (DomainError, QuadratureConfig, QuadratureError, adaptive_simpson, circle_moment,
                                 circle_pair_integral)

TWO_PI = 2 * math.pi


def circle_integrand(c, r, fn):
    def f(t):
        z = c + r * np.exp(2j * np.pi * t)
        return fn(z) * TWO_PI * r
    return f


def simpson(f, tol=1e-13):
    return adaptive_simpson(f, 0.0, 1.0, QuadratureConfig(abs_tol=tol, max_depth=60))[0]


def test_constant_and_cubic_are_exact():
    assert adaptive_simpson(lambda t: np.ones_like(t), 0, 1)[0] == pytest.approx(1.0, abs=1e-15)
    assert adaptive_simpson(lambda t: t**2, 0, 1)[0] == pytest.approx(1 / 3, abs=1e-15)
    assert adaptive_simpson(lambda t: t**3 - t, -1, 2)[0] == pytest.approx(2.25, abs=1e-14)


def test_gram_diagonal_integral():
    # int_0^{2pi} |e^{it} - 2|^{-2} dt = 2 pi / 3 by residues
    v, err = adaptive_simpson(lambda t: 1 / np.abs(np.exp(1j * t) - 2) ** 2, 0, TWO_PI, tol=1e-12)
    assert v == pytest.approx(TWO_PI / 3, abs=1e-11)
    assert err >= 0


def test_vector_valued_integrand_and_per_component_tolerance():
    f = lambda t: np.stack([np.sin(t), np.cos(t) * 1j, t**4], axis=-1)  # noqa: E731
    v, _ = adaptive_simpson(f, 0, math.pi, tol=np.array([1e-12, 1e-12, 1e-10]))
    assert v[0] == pytest.approx(2.0, abs=1e-11)
    assert abs(v[1]) < 1e-11
    assert v[2] == pytest.approx(math.pi**5 / 5, rel=1e-10)


def test_zero_width_interval():
    v, err = adaptive_simpson(lambda t: t, 1.0, 1.0)
    assert v == 0 and err == 0


def test_max_depth_error_carries_partial_value():
    cfg = QuadratureConfig(abs_tol=1e-14, max_depth=2, min_intervals=1)
    with pytest.raises(QuadratureError) as info:
        adaptive_simpson(lambda t: np.sqrt(np.abs(t - 0.3)), 0, 1, cfg)
    assert info.value.value is not None
    exact = (0.3**1.5 + 0.7**1.5) * 2 / 3
    assert abs(info.value.value - exact) < 1e-2


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_depth=0)


def test_pair_integral_examples():
    assert circle_pair_integral(0, 0, 0, 1.0) == pytest.approx(TWO_PI)
    assert circle_pair_integral(3 + 1j, 3 + 1j, 3 + 1j, 2.0) == pytest.approx(TWO_PI / 2)
    assert circle_pair_integral(2, 2, 0, 1.0) == pytest.approx(TWO_PI / 3, abs=1e-14)
    f = circle_integrand(0, 1.0, lambda z: 1 / z * np.conj(1 / (z - 2)))
    assert abs(circle_pair_integral(0, 2, 0, 1.0) - simpson(f)) < 1e-12


def test_moment_cases():
    assert circle_moment(0, 0, 1.0) == 0
    assert circle_moment(0.3 - 0.2j, 0, 1.0) == 0
    a, c, r = 3 + 1j, 0.5, 1.5
    f = circle_integrand(c, r, lambda z: 1 / (z - a))
    assert abs(circle_moment(a, c, r) - simpson(f)) < 1e-12
    assert circle_moment(a, c, r) == pytest.approx(TWO_PI * r / (c - a))
    f_in = circle_integrand(c, r, lambda z: 1 / (z - (c + 0.7j)))
    assert abs(simpson(f_in)) < 1e-12


def test_pole_on_contour_is_a_domain_error():
    with pytest.raises(DomainError):
        circle_pair_integral(1.0, 0, 0, 1.0)
    with pytest.raises(DomainError):
        circle_moment(1j, 0, 1.0)


def test_closed_forms_match_simpson_on_1000_random_cases():
    """Oracle: adaptive Simpson at 1e-14 times the integrand's size (never looser
    than 1e-13 absolute for integrands of size <= 10), poles kept 1e-2 off the circle."""
    rng = np.random.default_rng(7)

    def pole(c, r):
        while True:
            p = c + complex(*rng.uniform(-3 * r, 3 * r, 2))
            if abs(abs(p - c) - r) >= 1e-2:
                return p

    worst = 0.0
    for _ in range(1000):
        c = complex(*rng.uniform(-2, 2, 2))
        r = float(rng.uniform(0.2, 2))
        a, b = pole(c, r), pole(c, r)
        f = circle_integrand(c, r, lambda z: 1 / (z - a) * np.conj(1 / (z - b)))
        scale = np.abs(f(np.linspace(0, 1, 257))).max()
        worst = max(worst, abs(simpson(f, 1e-14 * max(1.0, scale)) - circle_pair_integral(a, b, c, r)))
    assert worst < 1e-12


def test_hermitian_symmetry_and_positivity():
    rng = np.random.default_rng(3)
    a = rng.normal(size=20) + 1j * rng.normal(size=20)
    a = a[np.abs(np.abs(a) - 1) > 1e-2]
    G = circle_pair_integral(a[:, None], a[None, :], 0, 1.0)
    assert np.allclose(G, G.conj().T, atol=1e-13)
    assert np.all(np.diag(G).real > 0)
    assert np.allclose(np.diag(G).imag, 0, atol=1e-14)
