"""Pattern configuration: base unit, seam allowance, connector density."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidConfig


@dataclass(frozen=True)
class PatternConfig:
    """Global sizing parameters shared by every module in a pattern.

    base_unit: grid cell side in cm (all module dimensions are multiples of it).
    seam_allowance: overlap margin in cm added around each cut module.
    connector_density: k; every unit edge carries 2k connection points spaced
    base_unit/(2k) apart, which keeps the count per edge even.
    max_panel_cells: solver-tractability cap on rasterized panel size.
    """

    base_unit: float = 8.0
    seam_allowance: float = 1.0
    connector_density: int = 1
    max_panel_cells: int = 64 * 64

    def validate(self) -> "PatternConfig":
        if self.base_unit <= 0:
            raise InvalidConfig(f"base_unit must be positive, got {self.base_unit}")
        if self.seam_allowance < 0:
            raise InvalidConfig("seam_allowance must be non-negative")
        if self.seam_allowance >= self.base_unit / 2:
            raise InvalidConfig(
                f"seam_allowance {self.seam_allowance} must be < base_unit/2 "
                f"({self.base_unit / 2})"
            )
        if not isinstance(self.connector_density, int) or self.connector_density < 1:
            raise InvalidConfig("connector_density must be an integer >= 1")
        if self.max_panel_cells < 1:
            raise InvalidConfig("max_panel_cells must be >= 1")
        return self

    @property
    def connectors_per_unit(self) -> int:
        return 2 * self.connector_density

    @property
    def connector_spacing(self) -> float:
        return self.base_unit / (2 * self.connector_density)

    def to_dict(self) -> dict:
        return {
            "base_unit_cm": self.base_unit,
            "seam_allowance_cm": self.seam_allowance,
            "connector_density": self.connector_density,
            "max_panel_cells": self.max_panel_cells,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PatternConfig":
        cfg = cls(
            base_unit=data.get("base_unit_cm", 8.0),
            seam_allowance=data.get("seam_allowance_cm", 1.0),
            connector_density=data.get("connector_density", 1),
            max_panel_cells=data.get("max_panel_cells", 64 * 64),
        )
        return cfg.validate()


def connector_positions(length: float, config: PatternConfig) -> list[float]:
    """Connector offsets along an edge of length m*base_unit.

    2k*m points, spaced base_unit/(2k), symmetric about the edge midpoint.
    """
    du = config.base_unit
    if length <= 0:
        raise InvalidConfig("edge length must be positive")
    units = length / du
    m = round(units)
    if m < 1 or abs(units - m) > 1e-9:
        raise InvalidConfig(f"edge length {length} is not a positive multiple of {du}")
    n = config.connectors_per_unit * m
    spacing = config.connector_spacing
    margin = (length - (n - 1) * spacing) / 2
    return [margin + i * spacing for i in range(n)]
