from typing import Literal, Tuple, Type

from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


class Settings(BaseSettings):
    # Numeric witnesses
    numeric_residual_threshold: float = 1e-10

    # Quantum correction
    q_value: str = "-1"

    # Reports
    report_format: Literal["text", "json"] = "text"
    log_level: str = "WARNING"
    fixture_time_budget_seconds: float = 5.0

    model_config = SettingsConfigDict(case_sensitive=True, frozen=True)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # Explicit arguments only.
        return (init_settings,)


settings = Settings()
