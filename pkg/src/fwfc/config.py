"""Run configuration and its line-oriented ``key = value`` file format."""
from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from pathlib import Path

from .band_model import GMMParams
from .postproc import CleanupParams
from .swt import BandType

_FG_KEY = re.compile(r"^fg_var\.([AHVD])(\d+)$")


@dataclass
class FWFCConfig:
    levels: int = 6
    boundary: str = "symmetric"
    calibration_frames: int = 25
    crop_factor: int | None = None      # None: 2 ** levels

    # fusion
    alpha_corr: float = 0.95
    noise_sigma: float | None = None    # None: MAD estimate on the first frame
    scale_noise: bool = False           # carry level-1 noise sigma down the levels
    level_fusion: str = "weighted"      # or "product" (ablation)
    ll_levels: str = "all"              # or "top"
    combine: str = "or"                 # LL / detail decision combination
    bands: str = "AHVD"

    # foreground model
    beta: float = 2.0
    uniform_density: float = 1.0 / 256.0
    fg_var: dict = field(default_factory=dict)   # {"H3": 12.0, ...} overrides

    # background GMM (image-domain reference values before scaling)
    learning_rate: float = 0.005
    max_components: int = 5
    bg_threshold: float = 0.1
    match_gate: float = 3.0
    var_init: float = 225.0
    var_min: float = 16.0
    var_max: float = 1125.0
    prune: float | None = None
    boost: float = 0.05
    selective_update: bool = False

    # morphology
    fill_side: int = 5
    denoise_side: int = 5
    final_side: int = 3

    baseline: bool = False

    def __post_init__(self):
        if self.levels < 0:
            raise ValueError("levels must be >= 0")
        if self.calibration_frames < 1:
            raise ValueError("calibration_frames must be >= 1")
        if not 0.0 < self.alpha_corr < 1.0:
            raise ValueError("alpha_corr must lie in (0, 1)")
        if self.boundary not in ("symmetric", "periodic"):
            raise ValueError(f"unknown boundary mode {self.boundary!r}")
        if self.level_fusion not in ("weighted", "product"):
            raise ValueError(f"unknown level_fusion {self.level_fusion!r}")
        if self.ll_levels not in ("all", "top"):
            raise ValueError(f"unknown ll_levels {self.ll_levels!r}")
        if self.combine not in ("or", "and"):
            raise ValueError(f"unknown combine mode {self.combine!r}")
        if not self.bands or set(self.bands) - set("AHVD"):
            raise ValueError(f"bands must be a non-empty subset of 'AHVD', got {self.bands!r}")
        for key in self.fg_var:
            if not re.fullmatch(r"[HVD]\d+", key):
                raise ValueError(f"fg_var override must name a detail band, got {key!r}")
        self.gmm  # validates GMM values
        self.cleanup

    @property
    def use_baseline(self) -> bool:
        return self.baseline or self.levels == 0

    @property
    def crop(self) -> int:
        return self.crop_factor if self.crop_factor is not None else 2 ** self.levels

    @property
    def enabled_bands(self) -> tuple[BandType, ...]:
        return tuple(BandType(b) for b in "AHVD" if b in self.bands)

    @property
    def gmm(self) -> GMMParams:
        return GMMParams(
            learning_rate=self.learning_rate, max_components=self.max_components,
            bg_threshold=self.bg_threshold, match_gate=self.match_gate,
            var_init=self.var_init, var_min=self.var_min, var_max=self.var_max,
            prune=self.prune, boost=self.boost,
        )

    @property
    def cleanup(self) -> CleanupParams:
        for side in (self.fill_side, self.denoise_side, self.final_side):
            if side < 1 or side % 2 == 0:
                raise ValueError(f"structuring element sides must be odd, got {side}")
        return CleanupParams(self.fill_side, self.denoise_side, self.final_side)

    def replace(self, **changes) -> "FWFCConfig":
        return dataclasses.replace(self, **changes)

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name == "fg_var":
                lines.extend(f"fg_var.{k} = {v!r}" for k, v in sorted(value.items()))
            elif value is None:
                lines.append(f"{f.name} = none")
            else:
                lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"


def _parse_bool(text: str) -> bool:
    t = text.lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _convert(name: str, text: str):
    hint = FWFCConfig.__dataclass_fields__[name].type
    optional = "None" in hint
    if optional and text.lower() in ("none", ""):
        return None
    if hint.startswith("int"):
        return int(text)
    if hint.startswith("float"):
        return float(text)
    if hint.startswith("bool"):
        return _parse_bool(text)
    return text


def parse_config(text: str, base: FWFCConfig | None = None) -> FWFCConfig:
    values = {}
    fg_var = dict(base.fg_var) if base else {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        m = _FG_KEY.match(key)
        if m:
            fg_var[m.group(1) + m.group(2)] = float(value)
        elif key in FWFCConfig.__dataclass_fields__ and key != "fg_var":
            try:
                values[key] = _convert(key, value)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: bad value for {key}: {exc}") from exc
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    base = base or FWFCConfig()
    return dataclasses.replace(base, fg_var=fg_var, **values)


def load_config(path: str | Path, base: FWFCConfig | None = None) -> FWFCConfig:
    return parse_config(Path(path).read_text(), base)
