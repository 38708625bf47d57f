"""Subspace imaging of thin penetrable layers buried in a half-space.

The package synthesizes multi-static response matrices for thin
inclusions below a planar interface (via a small-thickness asymptotic
model or a multiple-scattering point model) and retrieves the inclusion
supports with a non-iterative, SVD-based imaging functional evaluated
over a search grid, single- or multi-frequency.
"""

from .errors import (DatasetError, GeometryError, MediumError,
                     ResonanceError, ScenarioError, ThinscatError)
from .geometry import (CurveSample, ParametricCurve, arclength, eval_curve,
                       sample_curve, split_into_segments)
from .media import (EVANESCENCE_MARGIN, FrequencyContext, HalfSpaceMedium,
                    InclusionMaterial, PolarizationTensor, frequency_context,
                    is_propagating, polarization_tensor,
                    transmission_coefficient, transmitted_direction)
from .forward import (DirectionSet, FactoredMSR, MSRDataset, add_noise,
                      amplitude_prefactor, assemble_msr_factored,
                      assemble_msr_fine, assemble_msr_foldylax,
                      build_directions)
from .imaging import (ImageGrid, ImageMap, SteeringConfig, TruncatedSVD,
                      default_steering, image_multi, image_single, make_grid,
                      steering_vector, truncate_svd)
from .metrics import PeakMetrics, peak_metrics, truth_points
from .io import (dataset_load, dataset_save, export_matrix_csv, load_map_csv,
                 save_map_csv, save_map_pgm, save_map_png)
from .scenario import (Diagnostic, Scenario, canonical_json, frequency_list,
                       load_scenario, preset, preset_names, save_scenario,
                       scenario_hash, scenario_steering, synthesize, validate)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "ThinscatError", "GeometryError", "MediumError", "ResonanceError",
    "DatasetError", "ScenarioError",
    # geometry
    "ParametricCurve", "CurveSample", "eval_curve", "arclength",
    "sample_curve", "split_into_segments",
    # media
    "HalfSpaceMedium", "InclusionMaterial", "FrequencyContext",
    "PolarizationTensor", "frequency_context", "transmitted_direction",
    "transmission_coefficient", "is_propagating", "polarization_tensor",
    "EVANESCENCE_MARGIN",
    # forward
    "DirectionSet", "FactoredMSR", "MSRDataset", "build_directions",
    "amplitude_prefactor", "assemble_msr_fine", "assemble_msr_factored",
    "assemble_msr_foldylax", "add_noise",
    # imaging
    "TruncatedSVD", "SteeringConfig", "ImageGrid", "ImageMap",
    "truncate_svd", "steering_vector", "default_steering", "make_grid",
    "image_single", "image_multi",
    # metrics
    "PeakMetrics", "peak_metrics", "truth_points",
    # io
    "dataset_save", "dataset_load", "export_matrix_csv", "save_map_csv",
    "load_map_csv", "save_map_pgm", "save_map_png",
    # scenario
    "Scenario", "Diagnostic", "preset", "preset_names", "validate",
    "frequency_list", "scenario_steering", "synthesize", "canonical_json",
    "scenario_hash", "save_scenario", "load_scenario",
]
