"""Forward-looking sonar simulation: analytic expected reverberation,
Monte-Carlo ping simulation against a 3-D scene, and likelihood-ratio
obstacle detection."""

from .acoustics import (
    BeamOrientation,
    EnvironmentParams,
    SonarConfig,
    absorption_coeff,
    attenuation_total,
    beam_gain,
    beam_pattern_loss,
    max_range,
    noise_level,
    noise_level_band,
    range_resolution,
    sound_speed,
    spread_loss,
    transmission_loss,
    wavelength,
)
from .db import NO_RESPONSE, is_response, power_sum_db, to_db, to_linear
from .detect import (
    DetectionResult,
    HypothesisModel,
    decide,
    detect_ping,
    likelihood_ratio,
    likelihood_ratios,
    pd_pfa,
)
from .geometry import (
    BinLayout,
    SonarPose,
    bin_center,
    bin_index,
    cutoff_angles,
    ring_area,
    ring_grazing,
    shell_volume,
)
from .nullmodel import (
    NullModelReturn,
    QuadratureError,
    avg_ring_bp_loss,
    avg_sphere_bp_loss,
    bottom_return_bins,
    expected_null,
    surface_return_bins,
    volume_return_bins,
)
from .raysim import (
    Box,
    FlatBottom,
    Heightfield,
    Hit,
    PingReturn,
    Ray,
    Scene,
    TriangleMesh,
    add_noise,
    multipath_bounce,
    ping,
    ray_bin_volume,
    ray_patch_area,
    sample_ray_directions,
    trace_ray,
)
from .scatter import (
    ObjectMaterial,
    bottom_coeff,
    reverb_level,
    surface_coeff,
    target_echo_level,
    target_strength,
    volume_coeff,
)
from .scenario import Scenario, build_scene, load_scenario, loads, serialize

__version__ = "0.1.0"

__all__ = [
    "BeamOrientation",
    "BinLayout",
    "Box",
    "DetectionResult",
    "EnvironmentParams",
    "FlatBottom",
    "Heightfield",
    "Hit",
    "HypothesisModel",
    "NO_RESPONSE",
    "NullModelReturn",
    "ObjectMaterial",
    "PingReturn",
    "QuadratureError",
    "Ray",
    "Scenario",
    "Scene",
    "SonarConfig",
    "SonarPose",
    "TriangleMesh",
    "absorption_coeff",
    "add_noise",
    "attenuation_total",
    "avg_ring_bp_loss",
    "avg_sphere_bp_loss",
    "beam_gain",
    "beam_pattern_loss",
    "bin_center",
    "bin_index",
    "bottom_coeff",
    "bottom_return_bins",
    "build_scene",
    "cutoff_angles",
    "decide",
    "detect_ping",
    "expected_null",
    "is_response",
    "likelihood_ratio",
    "likelihood_ratios",
    "load_scenario",
    "loads",
    "max_range",
    "multipath_bounce",
    "noise_level",
    "noise_level_band",
    "pd_pfa",
    "ping",
    "power_sum_db",
    "range_resolution",
    "ray_bin_volume",
    "ray_patch_area",
    "reverb_level",
    "ring_area",
    "ring_grazing",
    "sample_ray_directions",
    "serialize",
    "shell_volume",
    "sound_speed",
    "spread_loss",
    "surface_coeff",
    "surface_return_bins",
    "target_echo_level",
    "target_strength",
    "to_db",
    "to_linear",
    "trace_ray",
    "transmission_loss",
    "volume_coeff",
    "volume_return_bins",
    "wavelength",
]
