import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fwfc.fusion import (
    FusionWeights, correlation, decide, fuse_bands, fuse_levels, fuse_levels_product,
    noise_weight, translation_weight,
)
from fwfc.swt import ALL_BANDS, BandType


def brute_translation_weight(level, alpha):
    side = 2 ** level
    c = (side - 1) / 2
    total = 0.0
    for i in range(side):
        for j in range(side):
            total += alpha ** math.hypot(i - c, j - c)
    return total / side ** 2


def test_correlation_examples():
    assert correlation(0, 0.5) == 1
    assert correlation(1, 0.5) == 0.5
    assert correlation(2, 0.5) == 0.25
    with pytest.raises(ValueError):
        correlation(1, 1.0)
    with pytest.raises(ValueError):
        correlation(-1, 0.5)


def test_translation_weight_level_one():
    assert translation_weight(1, 0.5) == pytest.approx(0.5 ** math.sqrt(0.5), abs=1e-12)
    assert translation_weight(1, 0.5) == pytest.approx(0.6125, abs=1e-4)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.9, 0.95, 0.99])
def test_translation_weight_matches_brute_force(alpha):
    for level in range(1, 6):
        assert translation_weight(level, alpha) == pytest.approx(
            brute_translation_weight(level, alpha), rel=1e-12)


def test_translation_weight_near_unit_correlation():
    for level in range(1, 7):
        assert translation_weight(level, 1 - 1e-12) == pytest.approx(1.0, abs=1e-9)


def test_noise_weight_examples():
    assert noise_weight(5, 0) == 1
    assert noise_weight(4, 4) == 0
    assert noise_weight(10, 2) == pytest.approx(0.8)
    assert noise_weight(1, 3) == 0
    assert noise_weight(0, 0) == 0


def test_weights_table():
    stds = {(b, l): 10.0 for l in range(1, 4) for b in ALL_BANDS}
    fw = FusionWeights.compute(stds, 2.0, 3, 0.95)
    assert fw[BandType.H, 2] == pytest.approx(translation_weight(2, 0.95) * 0.8)
    assert fw.for_band(BandType.D, [1, 2]) == [fw["D", 1], fw["D", 2]]
    lines = fw.report().splitlines()
    assert lines[1] == "band level omega_t omega_n omega"
    assert len(lines) == 2 + 12
    scaled = FusionWeights.compute(stds, 2.0, 3, 0.95, scale_noise=True)
    assert scaled.noise[(BandType.V, 3)] == pytest.approx(1 - 0.5 / 10)


def test_fuse_levels_examples():
    planes = [np.full((3, 3), v) for v in (1.0, 2.0, 3.0)]
    np.testing.assert_allclose(fuse_levels(planes, [0.9, 0.6, 0.3]), 1.0, rtol=0, atol=1e-15)
    p1, p2 = np.random.rand(4, 4), np.random.rand(4, 4)
    np.testing.assert_array_equal(fuse_levels([p1, p2], [1, 0]), p1 / 2)
    np.testing.assert_allclose(fuse_levels([np.full((2, 2), 7.0)] * 4, [1] * 4), 7.0)
    with pytest.raises(ValueError):
        fuse_levels([p1], [1, 2])
    with pytest.raises(ValueError):
        fuse_levels([p1, np.zeros((3, 3))], [1, 1])


def test_product_fusion():
    planes = [np.full((2, 2), v) for v in (0.5, 0.2)]
    np.testing.assert_allclose(fuse_levels_product(planes), 0.1)


def test_band_decision_examples():
    one = lambda v: np.full((1, 1), v)
    same = [one(0.3)] * 3
    assert not fuse_bands(same, same)[0, 0]
    assert fuse_bands([one(0.2)] * 3, [one(0.1)] * 3)[0, 0]
    # product of foreground factors 0.9*0.01*0.9 against 0.2**3, compared exactly
    f, b = (0.9, 0.01, 0.9), (0.2, 0.2, 0.2)
    exact = (Fraction("0.9") * Fraction("0.01") * Fraction("0.9")) > Fraction("0.2") ** 3
    assert exact
    assert fuse_bands([one(v) for v in f], [one(v) for v in b])[0, 0] == exact
    # one silent foreground band vetoes
    assert not fuse_bands([one(0.9), one(1e-4), one(0.9)], [one(0.2)] * 3)[0, 0]


def test_band_decision_underflow_is_floored():
    zero = np.zeros((1, 1))
    assert not fuse_bands([zero] * 3, [zero] * 3)[0, 0]
    assert fuse_bands([np.full((1, 1), 1e-200)] * 3, [zero] * 3)[0, 0]


def test_decide_modes():
    t, f = np.ones((1, 1), bool), np.zeros((1, 1), bool)
    hi, lo = np.full((1, 1), 0.5), np.full((1, 1), 0.1)
    assert decide(t, lo, hi)[0, 0]                   # hf only
    assert not decide(f, lo, hi)[0, 0]               # neither
    assert decide(f, hi, lo)[0, 0]                   # ll only, or
    assert not decide(f, hi, lo, "and")[0, 0]
    assert decide(t, hi, lo, "and")[0, 0]
    with pytest.raises(ValueError):
        decide(t, hi, lo, "xor")


plane_sets = st.tuples(st.integers(1, 16), st.integers(1, 16), st.integers(1, 6), st.integers(0, 2**32 - 1))


@settings(max_examples=60, deadline=None)
@given(plane_sets)
def test_fuse_levels_matches_pixelwise_loop(case):
    h, w, n, seed = case
    rng = np.random.default_rng(seed)
    planes = [rng.random((h, w)) for _ in range(n)]
    weights = rng.random(n).tolist()
    got = fuse_levels(planes, weights)
    for i in range(h):
        for j in range(w):
            ref = sum(wt * p[i, j] for wt, p in zip(weights, planes)) / n
            assert got[i, j] == pytest.approx(ref, rel=1e-12, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(plane_sets)
def test_fuse_bands_matches_pixelwise_loop(case):
    h, w, _, seed = case
    rng = np.random.default_rng(seed)
    fg = [10.0 ** rng.uniform(-8, 0, (h, w)) for _ in range(3)]
    bg = [10.0 ** rng.uniform(-8, 0, (h, w)) for _ in range(3)]
    got = fuse_bands(fg, bg)
    for i in range(h):
        for j in range(w):
            pf = math.prod(p[i, j] for p in fg)
            pb = math.prod(p[i, j] for p in bg)
            if abs(pf - pb) > 1e-9 * max(pf, pb):
                assert got[i, j] == (pf > pb)


def test_decision_invariant_under_uniform_scaling():
    rng = np.random.default_rng(9)
    fg = [10.0 ** rng.uniform(-6, 0, (16, 16)) for _ in range(3)]
    bg = [10.0 ** rng.uniform(-6, 0, (16, 16)) for _ in range(3)]
    base = fuse_bands(fg, bg)
    for s in 10.0 ** rng.uniform(-3, 3, 100):
        np.testing.assert_array_equal(fuse_bands([p * s for p in fg], [p * s for p in bg]), base)
