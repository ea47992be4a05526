"""Two-qutrit quantum Rabi model: Hamiltonians, spectra, phase-diagram and QPT scans."""

from ._core import (
    ModelParams,
    QrabiError,
    build_full,
    build_sector,
    candidate_energy,
    crossing_lines,
    estimate_critical_point,
    families,
    ground_energy,
    ground_family,
    ground_m,
    negativity,
    phase_diagram_point,
    preset_level_crossing,
    preset_qpt,
    qpt_point,
    scan_phase_diagram,
    spectrum,
    triple_points,
    version,
)

__version__ = version()

__all__ = [
    "ModelParams",
    "QrabiError",
    "build_full",
    "build_sector",
    "candidate_energy",
    "crossing_lines",
    "estimate_critical_point",
    "families",
    "ground_energy",
    "ground_family",
    "ground_m",
    "negativity",
    "phase_diagram_point",
    "preset_level_crossing",
    "preset_qpt",
    "qpt_point",
    "scan_phase_diagram",
    "spectrum",
    "triple_points",
    "version",
]
