"""
Floorplan Area Estimation Module

Linear floorplan model of one memory instance: the cell array (memory
columns plus the B reference columns, which share the cell pitch) surrounded
by fixed-size periphery for drivers, sense amplifiers, decoders and the
controller.

    width   = (N + B) * cell_pitch_x + periphery_width
    height  = M * cell_pitch_y + periphery_height
    area    = width * height * (1 + periphery_area_overhead)
    density = capacity in Mb / area in mm^2
"""

from dataclasses import dataclass

from .geometry import MemoryGeometry
from .technology import TechnologyProfile


@dataclass(frozen=True)
class AreaEstimate:
    """
    Attributes:
        width (float): meters
        height (float): meters
        area (float): square meters
        density (float): Mb/mm^2
    """
    width: float
    height: float
    area: float
    density: float

    @property
    def area_mm2(self) -> float:
        return self.area * 1e6

    def as_dict(self):
        return {
            "width_um": self.width * 1e6,
            "height_um": self.height * 1e6,
            "area_mm2": self.area_mm2,
            "density_mb_per_mm2": self.density,
        }


def density_of(capacity_bits: int, area_m2: float) -> float:
    return (capacity_bits / 1e6) / (area_m2 * 1e6)


def estimate_area(g: MemoryGeometry, t: TechnologyProfile) -> AreaEstimate:
    width = (g.N + g.B) * t.cell_pitch_x + t.periphery_width
    height = g.M * t.cell_pitch_y + t.periphery_height
    area = width * height * (1.0 + t.periphery_area_overhead)
    return AreaEstimate(width, height, area, density_of(g.capacity_bits, area))
