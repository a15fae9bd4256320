import os

import pytest

os.environ.setdefault("SGML_SETTINGS_MODULE", "config.settings.dev")


@pytest.fixture
def app_container():
    from apps.core.containers import configure_container, container

    configure_container()
    yield container
    container.shutdown_resources()
