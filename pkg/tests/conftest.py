import csv
from pathlib import Path

import pytest

from sqlbridge.engine import ModelStore, TableStore


def write_csv(path: Path, header: list[str], rows: list[list]):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def pytest_runtest_logreport(report):
    """Print one pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    criterion = name.removeprefix("test_").replace("_", " ")
    status = "pass" if report.passed else "fail"
    print(f"acceptance: {criterion}: {status}")


@pytest.fixture
def stores(tmp_path):
    db = tmp_path / "db"
    models = tmp_path / "models"
    db.mkdir()
    models.mkdir()
    return TableStore(db), ModelStore(models)
