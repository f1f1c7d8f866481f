import pytest


@pytest.fixture
def announce(capsys):
    """Print a line that bypasses capture, for the acceptance summary."""

    def _announce(text: str) -> None:
        with capsys.disabled():
            print(text)

    return _announce
