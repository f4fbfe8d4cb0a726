"""CLI for the byzgossip simulator."""

import json
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from . import __version__
from .errors import ByzGossipError, ConfigError
from .graph.membership import verify_gamma_membership
from .graph.spectral import spectral_info
from .graph.topology import Topology, honest_subgraph, laplacian
from .logging import setup_logging
from .pipeline import GENERATOR_PARAMS, build_topology, load_experiment, run_sweep
from .schema.models import TopologySpec
from .verify import SUITES, run_suite

EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2

app = typer.Typer(
    name="byzgossip",
    help="Byzantine-robust gossip simulator - CG+, NNA, attacks and theorem checks",
    add_completion=False,
)
console = Console()


def version_callback(value: bool):
    """Show version and exit."""
    if value:
        console.print(f"byzgossip version {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(
        None,
        "--version",
        "-v",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit",
    ),
):
    """Byzantine-robust gossip simulator."""
    pass


def _topology_from_source(source: str, args: list[str]) -> Topology:
    """Generator name with positional parameters, or an edge-list file path."""
    if source in GENERATOR_PARAMS:
        names = GENERATOR_PARAMS[source]
        if len(args) > len(names):
            raise ConfigError(f"{source} takes at most {len(names)} parameters: {', '.join(names)}")
        params: dict[str, float | int] = {}
        for name, raw in zip(names, args):
            try:
                params[name] = int(raw) if raw.lstrip("-").isdigit() else float(raw)
            except ValueError:
                raise ConfigError(f"{source}: parameter '{name}' must be numeric, got '{raw}'")
        return build_topology(TopologySpec(generator=source, params=params))
    if args:
        raise ConfigError(f"unexpected arguments after graph file: {' '.join(args)}")
    return build_topology(TopologySpec(file=source), base_dir=Path.cwd())


@app.command()
def spectra(
    source: str = typer.Argument(
        ..., help=f"Graph file or generator ({', '.join(GENERATOR_PARAMS)})"
    ),
    args: Optional[list[str]] = typer.Argument(None, help="Generator parameters"),
    mu_min: Optional[float] = typer.Option(
        None, "--mu-min", help="Class connectivity threshold (default: 2(b+1))"
    ),
    b: Optional[int] = typer.Option(
        None, "--b", "-b", help="Assumed Byzantine neighbors (default: measured maximum)"
    ),
    as_json: bool = typer.Option(False, "--json", help="Print a JSON report"),
    log_level: str = typer.Option("WARNING", "--log-level", "-l", help="Logging level"),
):
    """Spectra of a graph and its honest subgraph, class membership and margins."""
    setup_logging(log_level)

    try:
        topology = _topology_from_source(source, args or [])
    except (ByzGossipError, ValueError) as e:
        console.print(f"[red]{e}[/red]")
        raise typer.Exit(EXIT_CONFIG)

    honest, _ = honest_subgraph(topology)
    full_info = spectral_info(laplacian(topology)).to_report()
    honest_info = spectral_info(laplacian(honest)).to_report()
    b_value = topology.max_byzantine_neighbors() if b is None else b
    threshold = 2.0 * (b_value + 1) if mu_min is None else mu_min
    membership = verify_gamma_membership(topology, threshold, b_value)
    margins = {
        "cgplus": honest_info.mu2 - 2.0 * (b_value + 1),
        "nna": honest_info.mu2 - 8.0 * b_value,
    }

    if as_json:
        report = {
            "full": full_info.model_dump(mode="json"),
            "honest": honest_info.model_dump(mode="json"),
            "membership": membership.model_dump(mode="json"),
            "margins": margins,
        }
        typer.echo(json.dumps(report, indent=2))
        return

    table = Table(title=f"Spectra of {source} {' '.join(args or [])}".strip())
    table.add_column("Graph", style="cyan")
    table.add_column("n", justify="right")
    table.add_column("mu2", justify="right", style="green")
    table.add_column("mu_max", justify="right")
    table.add_column("gamma", justify="right")
    table.add_column("connected")
    for label, info in (("full", full_info), ("honest", honest_info)):
        table.add_row(
            label,
            str(info.n),
            f"{info.mu2:.6g}",
            f"{info.mu_max:.6g}",
            f"{info.gamma:.6g}",
            "yes" if info.connected else "[yellow]no[/yellow]",
        )
    console.print(table)

    if not honest_info.connected:
        console.print("[yellow]Honest subgraph is disconnected (mu2 = 0)[/yellow]")
    verdict = "[green]member[/green]" if membership.member else "[red]not a member[/red]"
    console.print(f"Gamma(mu_min={threshold:g}, b={b_value}): {verdict}")
    if membership.failing:
        console.print(f"  failing: {', '.join(membership.failing)}")
    console.print(f"Margin mu2 - 2(b+1) (CG+): {margins['cgplus']:.6g}")
    console.print(f"Margin mu2 - 8b (NNA):     {margins['nna']:.6g}")


@app.command()
def simulate(
    config_file: Path = typer.Option(
        ..., "--config", "-c", help="Path to the JSON experiment file"
    ),
    out: Optional[Path] = typer.Option(
        None, "--out", "-o", help="Output directory (default: $BYZGOSSIP_OUT or ./runs)"
    ),
    jobs: int = typer.Option(1, "--jobs", "-j", min=1, help="Worker processes"),
    seed: Optional[int] = typer.Option(None, "--seed", "-s", min=0, help="Override the seed"),
    monitor: bool = typer.Option(
        True, "--monitor/--no-monitor", help="Online theorem checks"
    ),
    log_level: str = typer.Option("INFO", "--log-level", "-l", help="Logging level"),
):
    """Run an experiment file (and its sweep), writing traces and a summary."""
    setup_logging(log_level)

    try:
        experiment = load_experiment(config_file)
    except ConfigError as e:
        console.print(f"[red]{e}[/red]")
        raise typer.Exit(EXIT_CONFIG)

    console.print(f"[bold]Running experiment '{experiment.name}'[/bold]")
    result = run_sweep(
        experiment,
        out_dir=out,
        jobs=jobs,
        seed=seed,
        monitor=None if monitor else False,
        base_dir=config_file.parent,
    )

    table = Table(title="Runs")
    table.add_column("Run", style="cyan")
    table.add_column("Status")
    table.add_column("Final Var_H", justify="right")
    table.add_column("Final bias", justify="right")
    table.add_column("Violations", justify="right")
    styles = {"ok": "green", "violations": "red", "error": "red", "config_error": "yellow"}
    for row in result.rows:
        style = styles.get(row["status"], "white")
        table.add_row(
            row["stem"],
            f"[{style}]{row['status']}[/{style}]",
            f"{row['final_var_h']:.4g}",
            f"{row['final_bias']:.4g}",
            str(row["violations"] + row["monitor_failures"]),
        )
        if row["status"] in ("error", "config_error"):
            console.print(f"[{style}]{row['stem']}: {row['detail']}[/{style}]")
    console.print(table)
    console.print(f"[green]Summary saved to {result.summary_path}[/green]")

    if result.exit_code:
        raise typer.Exit(result.exit_code)


@app.command()
def verify(
    suite: str = typer.Argument(..., help=f"Suite name ({', '.join(SUITES)}) or 'all'"),
    trials: Optional[int] = typer.Option(
        None, "--trials", "-t", min=1, help="Override randomized trial counts"
    ),
    as_json: bool = typer.Option(False, "--json", help="Print JSON results"),
    log_level: str = typer.Option("WARNING", "--log-level", "-l", help="Logging level"),
):
    """Run an acceptance suite and report pass/fail per criterion."""
    setup_logging(log_level)

    names = list(SUITES) if suite == "all" else [suite]
    overrides = {"trials": trials} if trials is not None else None
    results = []
    try:
        for name in names:
            results.extend(run_suite(name, overrides))
    except ConfigError as e:
        console.print(f"[red]{e}[/red]")
        raise typer.Exit(EXIT_CONFIG)

    failed = [r for r in results if not r.passed]
    if as_json:
        typer.echo(json.dumps([r.model_dump(mode="json") for r in results], indent=2))
    else:
        table = Table(title=f"Verification: {suite}")
        table.add_column("Suite", style="cyan")
        table.add_column("Criterion")
        table.add_column("Result")
        table.add_column("Detail")
        for r in results:
            mark = "[green]PASS[/green]" if r.passed else "[red]FAIL[/red]"
            table.add_row(r.suite, r.criterion, mark, r.detail)
        console.print(table)
        console.print(f"{len(results) - len(failed)}/{len(results)} criteria passed")

    if failed:
        raise typer.Exit(EXIT_CHECK_FAILED)


if __name__ == "__main__":
    app()
