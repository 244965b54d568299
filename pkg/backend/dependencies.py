from collections.abc import Generator
from functools import lru_cache

from vpquad.core.scenario_config import Config


@lru_cache(maxsize=1)
def _default_config() -> Config:
    return Config()


def get_default_config() -> Generator[Config, None, None]:
    """
    Dependency that provides the default scenario configuration.
    Config is frozen, so one shared instance serves every request.
    """
    yield _default_config()
