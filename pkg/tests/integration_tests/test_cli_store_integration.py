import pytest
from sqlalchemy.orm import sessionmaker
import database.db as db
from database.models import SimulationRun, SweepPoint
from qisim.cli import EXIT_OK, main
from qisim.csv_io import read_csv
from qisim.enums import RunMode


@pytest.fixture()
def file_database(tmp_path, monkeypatch):
    """Points the CLI's session factory at a throwaway sqlite file"""
    engine = db.make_engine(f"sqlite:///{tmp_path / 'runs.db'}")
    factory = sessionmaker(autocommit=False, autoflush=False, bind=engine)
    monkeypatch.setattr(db, "engine", engine)
    monkeypatch.setattr(db, "SessionLocal", factory)
    try:
        yield factory
    finally:
        engine.dispose()


def test_run_store_persists_sweep(tmp_path, file_database):
    """Tests run --store writes the CSV and one stored run with matching points"""
    config = tmp_path / "fig2a.cfg"
    config.write_text("M_values = 1e7, 2e7\nreceivers = sfg\n", encoding="utf-8")
    out = tmp_path / "fig2a.csv"
    argv = ["run", "--config", str(config), "--trials", "100", "--out", str(out), "--store"]
    assert main(argv) == EXIT_OK

    _, rows = read_csv(out)
    with file_database() as session:
        runs = session.query(SimulationRun).all()
        assert len(runs) == 1
        assert runs[0].mode is RunMode.FIG2A
        assert runs[0].trials == 100
        points = session.query(SweepPoint).order_by(SweepPoint.id).all()
        assert [point.M for point in points] == [int(row["M"]) for row in rows]
        assert [point.estimates[0].p_hat for point in points] == [
            float(row["p_sfg"]) for row in rows
        ]
