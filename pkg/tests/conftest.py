from pathlib import Path

import pytest

GOLDEN_DIR = Path(__file__).parent / "goldens"


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


def read_golden(name: str) -> str:
    return (GOLDEN_DIR / name).read_text()
