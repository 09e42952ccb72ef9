from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):  # type: ignore[misc]
    """Solver configuration loaded from environment variables (prefix ``SANDKIT_``)."""

    budget: int = 1_000_000
    restart_interval: int = 10_000

    feasibility_tol: float = 1e-7
    optimality_tol: float = 1e-9
    integrality_tol: float = 1e-6

    latency_exact_max_terminals: int = 9
    kneser_max_s: int = 6

    log_level: str = "WARNING"

    model_config = SettingsConfigDict(
        env_prefix="SANDKIT_",
        env_file=".env",
        env_file_encoding="utf-8",
    )


settings = Settings()
