"""CHSH machinery against high-precision and event-sampling oracles."""

import math

import numpy as np
import pytest

from oracles import mc_bell_parameter, mp_c_terms, mp_click_probabilities
from turbulight.bell import (
    DEFAULT_ANGLES_A,
    DEFAULT_ANGLES_B,
    BellSettings,
    BellSingularityError,
    bell_parameter,
    bell_sweep,
    c_terms,
    click_probabilities,
    correlation,
)
from turbulight.numerics import RandomSource
from turbulight.pdt import (
    Beta,
    Dirac,
    Empirical,
    PerfectlyCorrelated,
    Product,
    Scaled,
    TruncatedLogNormal,
)
from turbulight.photocount import DetectorModel


def _settings(squeezing, channel, efficiency=1.0, noise=0.0, **kw):
    det = DetectorModel(efficiency=efficiency, noise_counts=noise)
    return BellSettings(squeezing=squeezing, detector=det, channel=channel, **kw)


@pytest.mark.parametrize(
    "eta_a,eta_b,eta_c,squeezing,theta_a,theta_b",
    [
        (0.3, 0.7, 0.6, 0.4, 0.0, math.pi / 8),
        (1.0, 1.0, 1.0, 0.1, math.pi / 4, 3 * math.pi / 8),
        (0.9, 0.2, 0.75, 1.1, -0.3, 0.9),
    ],
)
def test_conditional_polynomials_match_reference(eta_a, eta_b, eta_c,
                                                 squeezing, theta_a, theta_b):
    got = c_terms(eta_a, eta_b, eta_c, squeezing, theta_a, theta_b)
    ref = mp_c_terms(eta_a, eta_b, eta_c, squeezing, theta_a, theta_b)
    for val, expected in zip(
        (got.c0, got.c1a, got.c1b, got.same, got.different), ref
    ):
        assert val == pytest.approx(float(expected), rel=1e-12, abs=1e-15)


def test_click_probabilities_match_high_precision_reference():
    settings = _settings(0.4, Product(Dirac(0.3), Dirac(0.7)),
                         efficiency=0.6, noise=1e-3)
    ps, pd = click_probabilities(settings, 0.0, math.pi / 8)
    ref_s, ref_d = mp_click_probabilities(0.3, 0.7, 0.6, 1e-3, 0.4,
                                          0.0, math.pi / 8)
    assert ps == pytest.approx(ref_s, rel=1e-12)
    assert pd == pytest.approx(ref_d, rel=1e-12)
    assert 0.0 < pd < ps < 1.0 or 0.0 < ps < pd < 1.0


def test_ideal_small_squeezing_reaches_tsirelson():
    settings = _settings(1e-3, Product(Dirac(1.0), Dirac(1.0)))
    b = bell_parameter(settings)
    assert b == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-4)
    assert b <= 2.0 * math.sqrt(2.0) + 1e-12


def test_correlation_approaches_negative_cosine():
    settings = _settings(1e-3, Product(Dirac(1.0), Dirac(1.0)))
    for delta in (math.pi / 8, math.pi / 3, 1.1):
        e = correlation(settings, 0.0, delta)
        assert e == pytest.approx(-math.cos(2.0 * delta), abs=1e-4)


def test_zero_squeezing_with_noise_gives_zero():
    settings = _settings(0.0, Product(Dirac(0.9), Dirac(0.9)), noise=1e-3)
    assert bell_parameter(settings) == 0.0


def test_zero_squeezing_without_noise_is_undefined():
    settings = _settings(0.0, Product(Dirac(0.9), Dirac(0.9)))
    with pytest.raises(ZeroDivisionError):
        bell_parameter(settings)


def test_correlation_depends_only_on_angle_difference():
    settings = _settings(0.45, Product(Dirac(0.8), Dirac(0.6)),
                         efficiency=0.9, noise=5e-4)
    base = correlation(settings, 0.3, 0.1)
    shifted = correlation(settings, 0.3 + 0.7, 0.1 + 0.7)
    assert shifted == pytest.approx(base, rel=1e-12)
    # analyzer angles enter through squared trig functions: period pi
    assert correlation(settings, 0.3 + math.pi, 0.1) == pytest.approx(
        base, rel=1e-12
    )


def test_noise_degrades_violation():
    channel = Product(Dirac(0.8), Dirac(0.8))
    values = [
        bell_parameter(_settings(0.4, channel, efficiency=0.9, noise=nu))
        for nu in (0.0, 1e-3, 1e-2)
    ]
    assert values[0] > values[1] > values[2]
    assert values[0] > 2.0  # still a violation at this working point


def test_copropagation_beats_independent_fading():
    fading = Beta(2.0, 2.0)
    for xi in (0.05, 0.2, 0.4):
        independent = bell_parameter(
            _settings(xi, Product(fading, fading), efficiency=0.85, noise=1e-3)
        )
        correlated = bell_parameter(
            _settings(xi, PerfectlyCorrelated(fading), efficiency=0.85,
                      noise=1e-3)
        )
        assert correlated > independent


def test_quadrature_matches_event_sampling():
    joint = Product(Beta(2.0, 2.0), Beta(2.0, 2.0))
    settings = _settings(0.3, joint, efficiency=0.85, noise=1e-3)
    b_quad = bell_parameter(settings)
    etas = joint.sample(400_000, RandomSource(seed=31))
    b_mc, se = mc_bell_parameter(etas, 0.85, 1e-3, 0.3,
                                 DEFAULT_ANGLES_A, DEFAULT_ANGLES_B)
    assert abs(b_quad - b_mc) < 4.0 * se


def test_atomic_channels_average_exactly():
    # a two-atom channel is the weighted mix of its constant channels at the
    # level of the averaged reciprocals, hence of the click probabilities
    law = Empirical((0.5, 0.9), (0.25, 0.75))
    settings = _settings(0.35, Product(law, Dirac(0.7)), noise=2e-3)
    ps, pd = click_probabilities(settings, 0.0, math.pi / 8)
    parts = [
        mp_click_probabilities(e, 0.7, 1.0, 2e-3, 0.35, 0.0, math.pi / 8)
        for e in (0.5, 0.9)
    ]
    assert ps == pytest.approx(0.25 * parts[0][0] + 0.75 * parts[1][0],
                               rel=1e-11)
    assert pd == pytest.approx(0.25 * parts[0][1] + 0.75 * parts[1][1],
                               rel=1e-11)


def test_extreme_squeezing_triggers_singularity_guard():
    settings = _settings(8.0, Product(Beta(2.0, 2.0), Beta(2.0, 2.0)))
    with pytest.raises(BellSingularityError, match="C_0"):
        bell_parameter(settings)


def test_settings_validation():
    channel = Product(Dirac(0.5), Dirac(0.5))
    det = DetectorModel()
    with pytest.raises(ValueError):
        BellSettings(squeezing=-0.1, detector=det, channel=channel)
    with pytest.raises(ValueError):
        BellSettings(squeezing=0.1, detector=det, channel=channel,
                     angles_a=(0.0, 1.0, 2.0))


def test_squeezing_sweep_matches_pointwise_evaluation():
    channel = Product(Dirac(0.9), Dirac(0.9))
    settings = _settings(0.1, channel, noise=1e-3)
    grid = [0.05, 0.2, 0.5]
    points = bell_sweep(settings, squeezing_grid=grid)
    assert [p.param for p in points] == grid
    assert all(p.valid for p in points)
    for p in points:
        direct = bell_parameter(_settings(p.param, channel, noise=1e-3))
        assert p.value == pytest.approx(direct, rel=1e-12)


def test_preselection_sweep_flags_empty_thresholds():
    # scale keeps the support top at 0.5 so a higher threshold empties the law
    law = Scaled(TruncatedLogNormal(-1.2, 0.6), 0.5)
    channel = Product(law, law)
    settings = _settings(0.25, channel, efficiency=0.9, noise=1e-3)
    points = bell_sweep(settings, preselection_grid=[0.0, 0.2, 0.8])
    assert points[0].valid and points[1].valid
    assert not points[2].valid and math.isnan(points[2].value)
    assert points[1].value != pytest.approx(points[0].value, rel=1e-6)


def test_sweep_requires_exactly_one_grid():
    settings = _settings(0.2, Product(Dirac(0.8), Dirac(0.8)), noise=1e-3)
    with pytest.raises(ValueError):
        bell_sweep(settings)
    with pytest.raises(ValueError):
        bell_sweep(settings, squeezing_grid=[0.1], preselection_grid=[0.1])
