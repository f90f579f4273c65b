"""Vision-based leader-follower flight: steering laws, corridor simulation,
emergence statistics and trajectory analysis."""

__version__ = "0.1.0"

from .kinematics import DEFAULT_DT, DEFAULT_SPEED, Trajectory, VehicleState, integrate, step
from .perception import image_coordinate, relative_geometry, time_to_transit, virtual_loom
from .steering import (ControlLaw, Kind, circling_control, classical_pursuit_control, constant_bearing_control,
                       distance_maintenance_control, follow_control, lyapunov_rate, lyapunov_value,
                       motion_camouflage_control)
from .strategy import (EpisodeConfig, PairingParams, Scenario, default_scenario, detect_leader, load_config,
                       load_scenario, run_episode, select_primitive)
from .emergence import (EmergenceSequence, interval_probabilities, ks_test_poisson, sample_poisson,
                        sliding_rate)

__all__ = [
    "ControlLaw", "DEFAULT_DT", "DEFAULT_SPEED", "EmergenceSequence", "EpisodeConfig", "Kind", "PairingParams",
    "Scenario", "Trajectory", "VehicleState", "circling_control", "classical_pursuit_control",
    "constant_bearing_control", "default_scenario", "detect_leader", "distance_maintenance_control",
    "follow_control", "image_coordinate", "integrate", "interval_probabilities", "ks_test_poisson",
    "load_config", "load_scenario", "lyapunov_rate", "lyapunov_value", "motion_camouflage_control",
    "relative_geometry", "run_episode", "sample_poisson", "select_primitive", "sliding_rate", "step",
    "time_to_transit", "virtual_loom",
]
