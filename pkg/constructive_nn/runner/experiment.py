"""
End-to-end experiments: load the data, grow or train a network, and
write every artifact into the run directory.

    <out.dir>/
        model.txt                   selected network
        checkpoints/model_h<k>.txt  network at the end of every phase
        trace.csv, errors_h<k>.csv, summary.txt
        config.txt                  resolved configuration
        run.json                    seeds, split, termination, file digests
        run.log
"""

from contextlib import contextmanager
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
import logging
import shutil
from typing import Dict, List, Optional, Sequence, Tuple, Union
import pandas as pd
from constructive_nn import __version__
from constructive_nn.data import SplitDataset, load_dataset
from constructive_nn.errors import ConfigError, ConstructiveNNError, SchemaError
from constructive_nn.growth import (
    BUDGET_EXHAUSTED,
    CRITERIA_MET,
    FIXED_TOPOLOGY,
    GrowthTrace,
    run_fixed,
    run_mfnnca
)
from constructive_nn.helpers.hash import hash_file
from constructive_nn.helpers.io import write_json
from constructive_nn.helpers.timestamp import get_timestamp
from constructive_nn.metrics import EvalResult, confusion_matrix, evaluate
from constructive_nn.runner.config import ExperimentConfig, build_config, describe_config
from constructive_nn.runner.model_io import load_model, save_model
from constructive_nn.runner.reports import emit_reports

logger = logging.getLogger(__name__)

MODES = ["grow", "train"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUDGET_EXHAUSTED = 2

EXIT_CODES = {
    CRITERIA_MET: EXIT_OK,
    FIXED_TOPOLOGY: EXIT_OK,
    BUDGET_EXHAUSTED: EXIT_BUDGET_EXHAUSTED
}


@dataclass
class RunArtifacts:
    out_dir: Path
    model: Path
    checkpoints: List[Path]
    reports: Dict[str, Path]
    config: Path
    run_json: Path
    run_log: Path
    trace: GrowthTrace = field(repr=False, default=None)

    @property
    def termination(self) -> str:
        return self.trace.termination

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.termination]


@contextmanager
def run_log(path: Path):
    """Copy the package's log records into a file for the duration of a run."""
    pkg_logger = logging.getLogger("constructive_nn")
    handler = logging.FileHandler(path, mode="w")
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler.setLevel(logging.INFO)
    prev_level = pkg_logger.level
    if pkg_logger.getEffectiveLevel() > logging.INFO:
        pkg_logger.setLevel(logging.INFO)
    pkg_logger.addHandler(handler)
    try:
        yield path
    finally:
        pkg_logger.removeHandler(handler)
        pkg_logger.setLevel(prev_level)
        handler.close()


RUN_FILES = ["model.txt", "config.txt", "run.json", "trace.csv", "summary.txt"]
RUN_PATTERNS = ["errors_h*.csv", "*.html"]


def clear_run_dir(out_dir: Path) -> List[Path]:
    """Remove the artifacts of an earlier run from out_dir."""
    stale = [out_dir / fname for fname in RUN_FILES if (out_dir / fname).is_file()]
    for pattern in RUN_PATTERNS:
        stale.extend(sorted(out_dir.glob(pattern)))
    for fp in stale:
        fp.unlink()
    if (out_dir / "checkpoints").is_dir():
        shutil.rmtree(out_dir / "checkpoints")
        stale.append(out_dir / "checkpoints")
    return stale


def load_experiment_data(cfg: ExperimentConfig) -> SplitDataset:
    return load_dataset(
        cfg.data_path,
        cfg.schema,
        order=cfg.order,
        seed=cfg.split_seed
    )


def run_experiment(cfg: ExperimentConfig, mode: str = "grow") -> RunArtifacts:
    """Run one experiment and write its artifacts into cfg.out_dir."""
    if mode not in MODES:
        raise ConfigError(f"Unknown mode '{mode}' (expected one of {MODES})")

    out_dir = cfg.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    log_path = out_dir / "run.log"

    with run_log(log_path):
        logger.info(f"constructive_nn {__version__}: {mode} on {cfg.dataset_name}")
        logger.info(f"Resolved configuration:\n{describe_config(cfg)}")
        logger.info(f"Seeds: weights={cfg.net.seed} shuffle={cfg.train.seed}")
        logger.info(f"Split order: {cfg.order}")

        stale = clear_run_dir(out_dir)
        if len(stale) > 0:
            logger.info(f"Removed {len(stale)} artifacts of an earlier run from {out_dir}")

        config_path = out_dir / "config.txt"
        cfg.write(config_path)

        try:
            data = load_experiment_data(cfg)
            if mode == "grow":
                net, trace = run_mfnnca(
                    data, cfg.net, cfg.train, cfg.stop,
                    encoding=cfg.schema.target_encoding,
                    new_unit=cfg.new_unit
                )
            else:
                net, trace = run_fixed(
                    data, cfg.net, cfg.train,
                    encoding=cfg.schema.target_encoding
                )
        except ConstructiveNNError as e:
            logger.error(f"Run failed: {e}")
            raise

        checkpoints = [
            save_model(ckpt, out_dir / "checkpoints" / f"model_h{ckpt.hidden_units}.txt")
            for ckpt in trace.checkpoints
        ]
        model_path = save_model(net, out_dir / "model.txt")
        reports = emit_reports(trace, out_dir, title=cfg.dataset_name, html=cfg.html)

        run_json = out_dir / "run.json"
        write_json(
            dict(
                version=__version__,
                mode=mode,
                timestamp=get_timestamp(),
                dataset=cfg.dataset_name,
                data_path=cfg.data_path,
                config=cfg.nested(),
                seeds=dict(weights=cfg.net.seed, shuffle=cfg.train.seed),
                split=dict(
                    order=cfg.order,
                    seed=cfg.split_seed,
                    train_n=len(data.train),
                    valid_n=len(data.valid),
                    test_n=len(data.test)
                ),
                termination=trace.termination,
                phases=len(trace.phases),
                selected_hidden_units=trace.best_phase.hidden_units,
                selected_overall_efficiency=trace.best_phase.overall_efficiency,
                sha256={
                    str(fp.relative_to(out_dir)): hash_file(fp)
                    for fp in [model_path] + checkpoints
                }
            ),
            run_json
        )
        logger.info(f"Termination: {trace.termination}; artifacts in {out_dir}")

    return RunArtifacts(
        out_dir=out_dir,
        model=model_path,
        checkpoints=checkpoints,
        reports=reports,
        config=config_path,
        run_json=run_json,
        run_log=log_path,
        trace=trace
    )


def eval_model(
    model_path: Union[str, Path],
    cfg: ExperimentConfig,
    split_name: str = "test",
    output: Optional[Union[str, Path]] = None
) -> Tuple[EvalResult, pd.DataFrame, Path]:
    """
    Evaluate a saved model on one split of the configured dataset.

    The result is written as a one-row CSV, by default next to the model
    as eval_<split>.csv. Returns the result, its confusion matrix and the
    path of the record.
    """
    model_path = Path(model_path)
    net = load_model(model_path)
    data = load_experiment_data(cfg)

    splits = data.splits()
    if split_name not in splits:
        raise ConfigError(f"Unknown split '{split_name}' (expected one of {list(splits)})")
    if net.input_dim != data.input_dim or net.output_dim != data.output_dim:
        raise SchemaError(
            f"Model {model_path} is {net.shape}, but dataset '{cfg.dataset_name}' "
            f"has {data.input_dim} inputs and {data.output_dim} outputs"
        )

    patterns = splits[split_name]
    result = evaluate(net, patterns, cfg.schema.target_encoding, split_name=split_name)
    confusion = confusion_matrix(net, patterns, cfg.schema.target_encoding)

    output = Path(output) if output is not None else model_path.parent / f"eval_{split_name}.csv"
    (
        pd.DataFrame([dict(
            model=str(model_path),
            dataset=cfg.dataset_name,
            **result.to_dict()
        )])
        .to_csv(output, index=False)
    )
    logger.info(f"Wrote evaluation record to {output}")
    return result, confusion, output


def _sweep_task(task: Tuple[str, Dict[str, object], Optional[Path], str]) -> dict:
    name, params, source, mode = task
    row = dict(
        run=name,
        config=str(source) if source is not None else "",
        net_seed=params["net.seed"],
        train_seed=params["train.seed"],
        out_dir=str(params["out.dir"])
    )
    try:
        artifacts = run_experiment(build_config(params, source=source), mode=mode)
    except ConstructiveNNError as e:
        logger.error(f"Run {name} failed: {e}")
        return dict(row, termination="error", phases=0, selected_hidden_units=None,
                    selected_overall_efficiency=None, error=str(e))
    return dict(
        row,
        termination=artifacts.termination,
        phases=len(artifacts.trace.phases),
        selected_hidden_units=artifacts.trace.best_phase.hidden_units,
        selected_overall_efficiency=artifacts.trace.best_phase.overall_efficiency,
        error=""
    )


def sweep_tasks(
    configs: Sequence[ExperimentConfig],
    seeds: Sequence[int],
    out_root: Union[str, Path],
    mode: str = "grow"
) -> List[Tuple[str, Dict[str, object], Optional[Path], str]]:
    """One task per (config, seed); each seed sets both the weight and shuffle seeds."""
    tasks = []
    for ix, cfg in enumerate(configs):
        cfg_name = cfg.source.stem if cfg.source is not None else f"config{ix + 1}"
        if len(configs) > 1 and cfg.source is not None:
            cfg_name = f"{ix + 1}_{cfg_name}"
        for seed in seeds:
            name = f"{cfg_name}_seed{seed}"
            params = dict(cfg.params)
            params["net.seed"] = seed
            params["train.seed"] = seed
            params["out.dir"] = Path(out_root) / name
            tasks.append((name, params, cfg.source, mode))
    return tasks


def run_sweep(
    configs: Sequence[ExperimentConfig],
    seeds: Sequence[int],
    out_root: Union[str, Path],
    mode: str = "grow",
    jobs: int = 1
) -> pd.DataFrame:
    """
    Run every config under every seed, in separate run directories, and
    write sweep.csv with one row per run into out_root.
    """
    if len(seeds) == 0:
        raise ConfigError("A sweep needs at least one seed")
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, not {jobs}")
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)

    tasks = sweep_tasks(configs, seeds, out_root, mode=mode)
    logger.info(f"Sweeping {len(tasks)} runs with {jobs} worker(s)")
    if jobs == 1:
        rows = [_sweep_task(task) for task in tasks]
    else:
        with Pool(jobs) as pool:
            rows = pool.map(_sweep_task, tasks)

    df = pd.DataFrame(rows)
    df.to_csv(out_root / "sweep.csv", index=False)
    logger.info(f"Wrote {out_root / 'sweep.csv'}")
    return df


def sweep_exit_code(df: pd.DataFrame) -> int:
    if (df["termination"] == "error").any():
        return EXIT_ERROR
    if (df["termination"] == BUDGET_EXHAUSTED).any():
        return EXIT_BUDGET_EXHAUSTED
    return EXIT_OK
