"""Built-in threshold and smoothing parameter sets."""

from __future__ import annotations

from dataclasses import dataclass

from .segmentation import SegmentationScheme, SmoothingMethod, SmoothingSpec


class PresetError(KeyError):
    """Raised for an unknown preset name."""


@dataclass(frozen=True)
class SchemePreset:
    name: str
    eta: tuple[float, ...]
    lam: tuple[float, ...] = ()
    gamma: tuple[float, ...] = ()
    mu: float = 10.0

    @property
    def scheme(self) -> SegmentationScheme:
        return SegmentationScheme(eta=self.eta)

    def smoothing(self, method: SmoothingMethod | str) -> SmoothingSpec:
        """Smoothing parameters of this preset for ``method``."""
        method = SmoothingMethod(method)
        if method is SmoothingMethod.QUANTILE:
            return SmoothingSpec(method=method, lam=self.lam, gamma=self.gamma, mu=self.mu)
        return SmoothingSpec(method=method, mu=self.mu)


PRESETS: dict[str, SchemePreset] = {
    "k3-default": SchemePreset(
        name="k3-default",
        eta=(0.0, 0.1, 0.9, 1.0),
        lam=(0.1, 0.1),
        gamma=(0.2, 1.0),
    ),
    "k5-default": SchemePreset(
        name="k5-default",
        eta=(0.0, 0.2, 0.35, 0.7, 0.9, 1.0),
        lam=(0.15, 0.03, 0.1, 0.1),
        gamma=(0.3, 0.5, 0.73, 1.0),
    ),
    # Weight-curve illustration set; score methods only.
    "k5-illustration": SchemePreset(
        name="k5-illustration",
        eta=(0.0, 0.1, 0.35, 0.7, 0.95, 1.0),
    ),
}

_SHORT_NAMES = {
    SmoothingMethod.UNSMOOTHED: "unsm",
    SmoothingMethod.QUANTILE: "q",
    SmoothingMethod.MIDPOINT_SCORE: "ms",
    SmoothingMethod.DISTANCE_SCORE: "ds",
}


def get_preset(name: str) -> SchemePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise PresetError(f"Unknown preset {name!r}; choose one of {sorted(PRESETS)}") from None


def variant_name(method: SmoothingMethod | str, K: int) -> str:  # noqa: N803
    """Short model name such as ``ds-5``."""
    return f"{_SHORT_NAMES[SmoothingMethod(method)]}-{K}"


def default_roster() -> list[tuple[str, SchemePreset, SmoothingSpec]]:
    """Every smoothing method on both default presets: eight named variants."""
    roster = []
    for preset_name in ("k3-default", "k5-default"):
        preset = PRESETS[preset_name]
        for method in SmoothingMethod:
            roster.append((variant_name(method, preset.scheme.K), preset, preset.smoothing(method)))
    return roster
