import logging
import os
from dataclasses import dataclass
from dotenv import load_dotenv, find_dotenv

load_dotenv(find_dotenv())


def _env_bool(name: str, default: bool = False) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


def _env_threads() -> int:
    value = os.getenv("QISIM_THREADS")
    cpus = os.cpu_count() or 1
    if not value:
        return cpus
    try:
        threads = int(value)
    except ValueError:
        logging.getLogger(__name__).warning(
            "Ignoring non-integer QISIM_THREADS=%r", value
        )
        return cpus
    return max(1, threads)


@dataclass(frozen=True)
class Settings:
    """Process-wide settings read from the environment (and a .env file)"""

    threads: int
    database_url: str
    log_level: str
    sql_echo: bool


def load_settings() -> Settings:
    return Settings(
        threads=_env_threads(),
        database_url=os.getenv("DATABASE_URL", "sqlite:///qisim.db"),
        log_level=os.getenv("QISIM_LOG_LEVEL", "INFO").upper(),
        sql_echo=_env_bool("QISIM_SQL_ECHO"),
    )


settings = load_settings()
