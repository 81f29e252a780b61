import os
from dotenv import load_dotenv
from typing import List

# Load environment variables
load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes", "on")


class Config:
    """Configuration class for the parallel NCSP solver"""

    # Solver defaults
    EPSILON: float = float(os.getenv("NCSP_EPSILON", "0.1"))
    PROPAGATION_RTOL: float = float(os.getenv("NCSP_PROPAGATION_RTOL", "1e-3"))
    PROPAGATION_MAX_ROUNDS: int = int(os.getenv("NCSP_PROPAGATION_MAX_ROUNDS", "50"))

    # Parallel defaults (N_BB, N_S, Delta, |N|)
    WORKERS: int = int(os.getenv("NCSP_WORKERS", "1"))
    NBB: int = int(os.getenv("NCSP_NBB", "32"))
    NS: int = int(os.getenv("NCSP_NS", "100"))
    DELTA: int = int(os.getenv("NCSP_DELTA", "10"))
    NEIGHBORS: int = int(os.getenv("NCSP_NEIGHBORS", "2"))
    PREPROCESS: bool = _env_bool("NCSP_PREPROCESS", "true")

    # Worker runtime
    POLL_SECONDS: float = float(os.getenv("NCSP_POLL_SECONDS", "0.01"))
    START_METHOD: str = os.getenv("NCSP_START_METHOD", "")

    # Run store
    DATABASE_PATH: str = os.getenv("DATABASE_PATH", "ncsp_runs.db")

    # Application Configuration
    APP_HOST: str = os.getenv("APP_HOST", "localhost")
    APP_PORT: int = int(os.getenv("APP_PORT", "8000"))
    DEBUG: bool = _env_bool("DEBUG", "false")

    @classmethod
    def validate_config(cls):
        """Validate solver settings, raising ValueError with every problem found"""
        problems: List[str] = []

        if not cls.EPSILON > 0:
            problems.append(f"NCSP_EPSILON must be positive (got {cls.EPSILON})")
        if cls.NBB < 2:
            problems.append(f"NCSP_NBB must be at least 2 (got {cls.NBB})")
        if cls.NS < 1:
            problems.append(f"NCSP_NS must be at least 1 (got {cls.NS})")
        if cls.DELTA < 0:
            problems.append(f"NCSP_DELTA must be nonnegative (got {cls.DELTA})")
        if cls.NEIGHBORS not in (2, 4):
            problems.append(f"NCSP_NEIGHBORS must be 2 or 4 (got {cls.NEIGHBORS})")
        if cls.WORKERS < 1:
            problems.append(f"NCSP_WORKERS must be at least 1 (got {cls.WORKERS})")
        if not 0 < cls.PROPAGATION_RTOL < 1:
            problems.append(f"NCSP_PROPAGATION_RTOL must lie in (0, 1) (got {cls.PROPAGATION_RTOL})")
        if cls.PROPAGATION_MAX_ROUNDS < 1:
            problems.append(f"NCSP_PROPAGATION_MAX_ROUNDS must be at least 1 (got {cls.PROPAGATION_MAX_ROUNDS})")

        if problems:
            raise ValueError(f"Invalid solver configuration: {'; '.join(problems)}")

        return True


# Global config instance
config = Config()
