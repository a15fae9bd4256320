"""
Lazy access to the active settings module.

The module is chosen by the SGML_SETTINGS_MODULE environment variable and
imported on first attribute access, so ``from apps.core.conf import settings``
is safe at import time.
"""

import importlib
import os
from types import ModuleType
from typing import Any

ENVIRONMENT_VARIABLE = "SGML_SETTINGS_MODULE"
DEFAULT_SETTINGS_MODULE = "config.settings.dev"


class LazySettings:
    """Proxy that imports the settings module on first use."""

    def __init__(self) -> None:
        self._wrapped: ModuleType | None = None

    def _setup(self) -> ModuleType:
        module_name = os.environ.get(ENVIRONMENT_VARIABLE, DEFAULT_SETTINGS_MODULE)
        self._wrapped = importlib.import_module(module_name)
        return self._wrapped

    def __getattr__(self, name: str) -> Any:
        if name.startswith("_"):
            raise AttributeError(name)
        wrapped = self._wrapped or self._setup()
        return getattr(wrapped, name)

    @property
    def configured(self) -> bool:
        return self._wrapped is not None


settings = LazySettings()
