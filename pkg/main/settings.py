import os
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict
from errors import InvalidInputError

load_dotenv(override=True)

VERSION = "0.1.0"


class Tolerances(BaseModel):
    """
    Every numerical tolerance used in validation, in one record
    """

    model_config = ConfigDict(frozen=True)

    herm: float = 1e-9
    psd: float = 1e-9
    trace: float = 1e-9
    eig: float = 1e-10
    norm: float = 1e-12
    prob_clamp: float = 1e-12
    null_state: float = 1e-12
    ppt_entangled: float = -1e-8
    borderline: float = 1e-9
    table_slack: float = 1e-10
    fixture_repair: float = 1e-3


PROFILES = {
    "default": Tolerances(),
    "strict": Tolerances(herm=1e-12, psd=1e-12, trace=1e-12),
}


class Settings:
    TOLERANCE_PROFILE = os.getenv("STEERING_TOLERANCE_PROFILE", "default")
    OUTPUT_DIR = os.getenv("STEERING_OUTPUT_DIR", "results")
    GRID_2D = int(os.getenv("STEERING_GRID_2D", "101"))
    GRID_3D = int(os.getenv("STEERING_GRID_3D", "41"))
    LOG_LEVEL = os.getenv("STEERING_LOG_LEVEL", "INFO")
    SHOW_PROGRESS = os.getenv("STEERING_SHOW_PROGRESS", "true").lower() == "true"


_active = PROFILES.get(Settings.TOLERANCE_PROFILE, PROFILES["default"])


def tolerances() -> Tolerances:
    return _active


def use_tolerance_profile(name: str) -> Tolerances:
    global _active
    if name not in PROFILES:
        raise InvalidInputError(f"Unknown tolerance profile '{name}', expected one of {sorted(PROFILES)}")
    _active = PROFILES[name]
    return _active
