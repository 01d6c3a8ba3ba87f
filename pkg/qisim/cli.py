"""Command-line entry point: ``qisim run | bounds | validate``

Exit codes: 0 success, 1 configuration error, 2 runtime error. Progress and
logs go to standard error; tables go to CSV files.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence
from pydantic import ValidationError
from qisim.bounds import scenario_bounds
from qisim.config import RunConfig, parse_config, render_config, with_overrides
from qisim.controller import build_schedule
from qisim.csv_io import ResultTable, emit_csv
from qisim.enums import ReceiverKind, RunMode
from qisim.exceptions import ConfigError, QisimError
from qisim.fock import fock_evolve
from qisim.harness import run_trial, sweep, sweep_table, trajectory_table, trial_rng
from qisim.models import ModePairMoments, SweepSpec
from qisim.settings import settings

logger = logging.getLogger("qisim")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

_FLOAT_OVERRIDES = ("N_S", "kappa", "N_B", "eta", "epsilon", "qcb")
_INT_OVERRIDES = ("K", "M", "trials", "seed")
BOUNDS_COLUMNS = ("bound", "p_err", "exponent")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="flat key = value config file")
    parser.add_argument("--mode", choices=[mode.value for mode in RunMode])
    parser.add_argument("--out", help="output CSV path (prefix for figS1)")
    for name in _FLOAT_OVERRIDES:
        parser.add_argument(f"--{name}", type=float, dest=name)
    for name in _INT_OVERRIDES:
        parser.add_argument(f"--{name}", type=int, dest=name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qisim", description="Quantum-illumination SFG / FF-SFG receiver simulator"
    )
    commands = parser.add_subparsers(dest="command", required=True)
    run = commands.add_parser("run", help="run a sweep, Fock validation or trajectory")
    _add_common(run)
    run.add_argument("--store", action="store_true", help="persist sweeps to DATABASE_URL")
    run.add_argument("--progress", action="store_true", help="show progress bars")
    _add_common(commands.add_parser("bounds", help="write the closed-form bounds"))
    _add_common(commands.add_parser("validate", help="check a config, print derived values"))
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    text = args.config.read_text(encoding="utf-8") if args.config else ""
    config = parse_config(text)
    overrides = {name: getattr(args, name, None) for name in (*_FLOAT_OVERRIDES, *_INT_OVERRIDES)}
    overrides["mode"] = args.mode
    overrides["out"] = args.out
    return with_overrides(config, overrides)


def derived_quantities(config: RunConfig) -> dict[str, float]:
    params = config.scenario()
    schedule = build_schedule(params)
    bounds = scenario_bounds(params)
    return {
        "C_p": params.C_p,
        "K": schedule.K,
        "epsilon": schedule.epsilon,
        "N_T_coh": schedule.N_T_coh,
        "N_T_coh_asymptotic": schedule.N_T_coh_asymptotic,
        "N_T_therm": schedule.N_T_therm,
        "QCB": bounds["qcb"].error_probability,
    }


def bounds_table(config: RunConfig) -> ResultTable:
    results = scenario_bounds(config.scenario())
    return ResultTable(
        columns=BOUNDS_COLUMNS,
        rows=[(label, result.error_probability, result.exponent) for label, result in results.items()],
        comments=(f"M={config.scenario().M}",),
    )


def _output(config: RunConfig, default: str) -> Path:
    return Path(config.out) if config.out else Path(default)


def _run_sweep(config: RunConfig, progress: bool, store: bool) -> list[Path]:
    values = config.M_values if config.mode is RunMode.FIG2A else config.N_S_values
    spec = SweepSpec(
        mode=config.mode,
        base=config.scenario(),
        values=tuple(values),
        receivers=config.receivers,
        trials=config.trials,
        seed=config.seed,
        qcb_target=config.qcb,
        law=config.mu_total_law,
        count_threshold=config.count_threshold,
        progress=progress,
    )
    rows = sweep(spec)
    path = emit_csv(sweep_table(spec, rows), _output(config, f"{config.mode.value}.csv"))
    if store:
        from database.db import get_db_context
        from database.repositories.run import RunRepository

        with get_db_context() as session:
            run = RunRepository(session).store_sweep(config, render_config(config), rows)
            logger.info("Stored run %d with %d points", run.id, len(rows))
    return [path]


def _run_fock(config: RunConfig) -> list[Path]:
    moments = ModePairMoments(n_s=config.fock_n_s, n_i=config.fock_n_i, C_si=config.fock_C)
    target = _output(config, "figS1.csv")
    paths = []
    g = config.scenario().g
    for fock_config in config.fock_configs():
        series = fock_evolve(moments, fock_config, g=g)
        path = target.with_name(f"{target.stem}_M{fock_config.M}{target.suffix or '.csv'}")
        paths.append(emit_csv(series.to_table(), path))
    return paths


def _run_trajectory(config: RunConfig) -> list[Path]:
    params = config.scenario()
    receiver = (
        ReceiverKind.FF_SFG if ReceiverKind.FF_SFG in config.receivers else config.receivers[0]
    )
    trajectory = run_trial(
        params,
        receiver,
        config.h_true,
        trial_rng(config.seed, config.h_true, 0),
        law=config.mu_total_law,
        count_threshold=config.count_threshold,
    )
    return [emit_csv(trajectory_table(trajectory, config.seed), _output(config, "trajectory.csv"))]


def execute(config: RunConfig, progress: bool = False, store: bool = False) -> list[Path]:
    """Run one configured experiment and return the files written"""
    if config.mode in (RunMode.FIG2A, RunMode.FIG2B):
        return _run_sweep(config, progress, store)
    if config.mode is RunMode.FIGS1:
        return _run_fock(config)
    if config.mode is RunMode.TRAJECTORY:
        return _run_trajectory(config)
    return [emit_csv(bounds_table(config), _output(config, "bounds.csv"))]


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(
        level=level or settings.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        if args.command == "validate":
            for name, value in derived_quantities(config).items():
                print(f"{name} = {value:.17g}")
            return EXIT_OK
        if args.command == "bounds":
            config = config.model_copy(update={"mode": RunMode.BOUNDS})
        paths = execute(
            config,
            progress=getattr(args, "progress", False),
            store=getattr(args, "store", False),
        )
    except (ConfigError, ValidationError) as exc:
        logger.error("Configuration error: %s", exc)
        return EXIT_CONFIG
    except (QisimError, OSError, ValueError) as exc:
        logger.error("Run failed: %s", exc)
        return EXIT_RUNTIME
    for path in paths:
        logger.info("Wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
