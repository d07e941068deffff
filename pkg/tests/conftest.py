"""Shared fixtures; the expensive grid verdict is computed once per
session and reused by the verifier and acceptance suites."""

import pytest

from wrightbound.verifiers import verify_2_15b


@pytest.fixture(scope="session")
def verdict_2_15b():
    return verify_2_15b()
