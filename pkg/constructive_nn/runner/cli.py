#!/usr/bin/env python

import logging
from pathlib import Path
import sys
from typing import List
import click
from constructive_nn import __version__
from constructive_nn.errors import ConfigError, ConstructiveNNError
from constructive_nn.helpers.io import read_json
from constructive_nn.runner.config import config_keys, load_config
from constructive_nn.runner.experiment import (
    EXIT_ERROR,
    EXIT_OK,
    eval_model,
    run_experiment,
    run_sweep,
    sweep_exit_code
)
from constructive_nn.runner.reports import (
    SUMMARY_FILE,
    read_histories,
    read_trace,
    write_figures,
    write_summary
)

logger = logging.getLogger(__name__)


class RunnerGroup(click.Group):
    """
    Exit with 0 (criteria met), 2 (budget exhausted) or 1 (any error,
    usage errors included).
    """

    def main(self, args=None, **kwargs):
        kwargs.pop("standalone_mode", None)
        try:
            code = super().main(args=args, standalone_mode=False, **kwargs)
        except click.ClickException as e:
            e.show()
            code = EXIT_ERROR
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = EXIT_ERROR
        except (ConstructiveNNError, OSError) as e:
            click.echo(f"Error: {e}", err=True)
            code = EXIT_ERROR
        if not isinstance(code, int):
            code = EXIT_OK
        sys.exit(code)


def config_options(f):
    """One --<section>.<key> flag per configuration key."""
    for key, elem in reversed(list(config_keys().items())):
        f = click.option(
            f"--{key}",
            key.replace(".", "__"),
            type=str,
            default=None,
            help=" ".join(elem.get("help", "").split())
        )(f)
    return f


def _overrides(kwargs) -> dict:
    return {
        kw.replace("__", "."): val
        for kw, val in kwargs.items()
        if "__" in kw and val is not None
    }


def _parse_seeds(text: str) -> List[int]:
    """'0,1,2' or '0-9' (inclusive) or a mix of both."""
    seeds = []
    for item in text.split(","):
        item = item.strip()
        if len(item) == 0:
            continue
        try:
            if "-" in item:
                start, end = item.split("-", 1)
                seeds.extend(range(int(start), int(end) + 1))
            else:
                seeds.append(int(item))
        except ValueError:
            raise ConfigError(f"Could not parse seeds '{text}'")
    if len(seeds) == 0:
        raise ConfigError("No seeds given")
    return seeds


@click.group(cls=RunnerGroup)
@click.version_option(__version__, prog_name="constructive-nn")
@click.option("--verbose", is_flag=True, help="Log debug messages")
def cli(verbose):
    """Grow single-hidden-layer networks one hidden unit at a time."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO)


def _run(config, mode, kwargs) -> int:
    cfg = load_config(config, _overrides(kwargs))
    artifacts = run_experiment(cfg, mode=mode)
    click.echo(artifacts.reports["summary"].read_text(), nl=False)
    click.echo(f"Artifacts written to {artifacts.out_dir}")
    return artifacts.exit_code


@cli.command()
@click.argument("config", required=False)
@config_options
def grow(config, **kwargs):
    """Grow a network from one hidden unit until the stopping criteria hold."""
    return _run(config, "grow", kwargs)


@cli.command()
@click.argument("config", required=False)
@config_options
def train(config, **kwargs):
    """Train a fixed-topology network of net.hidden_units units."""
    return _run(config, "train", kwargs)


@cli.command(name="eval")
@click.argument("model")
@click.argument("config", required=False)
@click.option("--split", "split_name", type=click.Choice(["train", "valid", "test"]), default="test",
              help="Split to evaluate")
@click.option("--output", type=str, default=None, help="Record file (default: eval_<split>.csv next to the model)")
@config_options
def eval_cmd(model, config, split_name, output, **kwargs):
    """Evaluate a saved model on one split of a dataset."""
    cfg = load_config(config, _overrides(kwargs))
    result, confusion, record = eval_model(model, cfg, split_name=split_name, output=output)
    click.echo(
        f"{result.split_name}: {result.classified_count}/{result.total} classified, "
        f"efficiency {result.efficiency_percent:.5f}%, mse {result.ms_error:.6f}"
    )
    click.echo(confusion.to_string())
    click.echo(f"Record written to {record}")
    return EXIT_OK


@cli.command()
@click.argument("configs", nargs=-1, required=True)
@click.option("--seeds", type=str, default="0-9", help="Seeds, e.g. '0-9' or '1,5,7'")
@click.option("--jobs", type=int, default=1, help="Runs executed in parallel")
@click.option("--out-root", type=str, default="runs/sweep", help="Directory holding every run")
@click.option("--mode", type=click.Choice(["grow", "train"]), default="grow")
@config_options
def sweep(configs, seeds, jobs, out_root, mode, **kwargs):
    """Run one or more configs under a list of seeds; writes sweep.csv."""
    overrides = _overrides(kwargs)
    cfgs = [load_config(config, overrides) for config in configs]
    df = run_sweep(cfgs, _parse_seeds(seeds), out_root, mode=mode, jobs=jobs)
    click.echo(df.to_string(index=False))
    return sweep_exit_code(df)


@cli.command()
@click.argument("run_dir")
@click.option("--html", is_flag=True, help="Also write error_curve.html and growth.html")
def report(run_dir, html):
    """Rebuild summary.txt (and optional figures) from a run's trace.csv."""
    run_dir = Path(run_dir)
    trace_df = read_trace(run_dir)

    title, termination = None, None
    if (run_dir / "run.json").is_file():
        run_info = read_json(run_dir / "run.json")
        title = run_info.get("dataset")
        termination = run_info.get("termination")

    summary = write_summary(trace_df, run_dir / SUMMARY_FILE, title=title, termination=termination)
    click.echo(summary.read_text(), nl=False)
    if html:
        for fp in write_figures(trace_df, read_histories(run_dir), run_dir).values():
            click.echo(f"Wrote {fp}")
    return EXIT_OK


def main():
    cli(prog_name="constructive-nn")


if __name__ == "__main__":
    main()
