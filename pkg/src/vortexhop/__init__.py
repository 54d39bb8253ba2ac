"""BER analysis of OAM mode hopping, frequency hopping and their mix under Nakagami-m fading."""

from .ber import (
    DPSK,
    FSK,
    MfhGain,
    Modulation,
    average_ber,
    average_ber_fh,
    average_ber_mfh,
    average_ber_mh,
    conditional_ber,
    mfh_map_sinr,
    mfh_single_ber,
    mfh_theorem_ber,
    reduced_ber,
    theorem1_ber,
    theorem2_ber,
)
from .errors import (
    ConfigError,
    DomainError,
    EnumerationLimitError,
    NumericalDiagnostic,
    PreconditionError,
    VortexHopError,
)
from .fading import SinrModel
from .hopping import CollisionModel, JamProfile
from .mc import BerEstimate, Fidelity, McConfig, Scenario, estimate_ber
from .system import SystemConfig, db_to_linear, linear_to_db

__version__ = "0.1.0"

__all__ = [
    "BerEstimate",
    "CollisionModel",
    "ConfigError",
    "DPSK",
    "DomainError",
    "EnumerationLimitError",
    "FSK",
    "Fidelity",
    "JamProfile",
    "McConfig",
    "MfhGain",
    "Modulation",
    "NumericalDiagnostic",
    "PreconditionError",
    "Scenario",
    "SinrModel",
    "SystemConfig",
    "VortexHopError",
    "average_ber",
    "average_ber_fh",
    "average_ber_mfh",
    "average_ber_mh",
    "conditional_ber",
    "db_to_linear",
    "estimate_ber",
    "linear_to_db",
    "mfh_map_sinr",
    "mfh_single_ber",
    "mfh_theorem_ber",
    "reduced_ber",
    "theorem1_ber",
    "theorem2_ber",
]
