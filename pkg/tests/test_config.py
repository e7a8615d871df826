import pytest

from fwfc.config import FWFCConfig, load_config, parse_config
from fwfc.swt import BandType


def test_defaults():
    cfg = FWFCConfig()
    assert cfg.levels == 6 and cfg.crop == 64 and cfg.alpha_corr == 0.95
    assert cfg.gmm.var_init == 225.0 and cfg.gmm.prune_value == pytest.approx(5e-5)
    assert cfg.enabled_bands == (BandType.A, BandType.H, BandType.V, BandType.D)
    assert not cfg.use_baseline and FWFCConfig(levels=0).use_baseline


def test_parse_values_and_comments():
    cfg = parse_config("""
        # comment line
        levels = 4
        alpha_corr = 0.9   # trailing comment
        noise_sigma = 1.5
        combine = and
        selective_update = yes
        fg_var.H3 = 12.5
        crop_factor = none
    """)
    assert cfg.levels == 4 and cfg.alpha_corr == 0.9 and cfg.noise_sigma == 1.5
    assert cfg.combine == "and" and cfg.selective_update
    assert cfg.fg_var == {"H3": 12.5} and cfg.crop == 16


def test_round_trip_through_text():
    cfg = FWFCConfig(levels=3, beta=1.5, fg_var={"D2": 4.0}, noise_sigma=0.7)
    assert parse_config(cfg.to_text()) == cfg


@pytest.mark.parametrize("text, match", [
    ("levels", "expected"),
    ("colour = red", "unknown key"),
    ("levels = many", "line 1"),
    ("alpha_corr = 1.5", "alpha_corr"),
    ("boundary = zero", "boundary"),
    ("fill_side = 4", "odd"),
    ("bands = AX", "bands"),
    ("learning_rate = 0", "learning_rate"),
])
def test_rejects_bad_input(text, match):
    with pytest.raises(ValueError, match=match):
        parse_config(text)


def test_fg_var_must_name_detail_band():
    with pytest.raises(ValueError):
        FWFCConfig(fg_var={"A1": 3.0})


def test_load_from_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("levels = 2\n")
    assert load_config(p).levels == 2
