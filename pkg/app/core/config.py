import os
from pydantic_settings import BaseSettings
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    PROJECT_NAME: str = "Albert"
    VERSION: str = "1.0.0"

    # Default seed and sample count for suites
    SEED: int = int(os.getenv("ALBERT_SEED", "0"))
    SAMPLES: int = int(os.getenv("ALBERT_SAMPLES", "50"))

    # Sampled Jordan checks that constructors run before returning
    VALIDATION_SAMPLES: int = int(os.getenv("ALBERT_VALIDATION_SAMPLES", "3"))
    VALIDATION_SEED: int = int(os.getenv("ALBERT_VALIDATION_SEED", "271828"))

    # Search limits
    NORM_SEARCH_CAP: int = int(os.getenv("ALBERT_NORM_SEARCH_CAP", "5000"))
    FRAME_MOVER_TRIES: int = int(os.getenv("ALBERT_FRAME_MOVER_TRIES", "200"))
    EXHAUSTIVE_PAIR_LIMIT: int = int(os.getenv("ALBERT_EXHAUSTIVE_PAIR_LIMIT", "65536"))

    LOG_LEVEL: str = os.getenv("ALBERT_LOG_LEVEL", "WARNING")

    class Config:
        case_sensitive = True
        env_prefix = "ALBERT_"

settings = Settings()
