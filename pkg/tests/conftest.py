import pytest

from ptower import groupcore


@pytest.fixture(scope="session")
def builtin_tables():
    return {name: groupcore.builtin_group(name) for name in groupcore.BUILTIN_GROUPS}
