"""CLI entry point for edpn."""

import logging
import sys
from typing import Optional

import click

from edpn import __version__
from edpn.core.constants import (
    EXIT_BUDGET,
    EXIT_COMPOSITION,
    EXIT_CONFLICT,
    EXIT_IO,
    EXIT_VALIDATION,
)
from edpn.core.exceptions import (
    BudgetExceeded,
    CapacityViolation,
    CompositionConflict,
    ConfigError,
    ConflictPolicyError,
    EdpnError,
    FixtureNotFoundError,
    ModelParseError,
    NetValidationError,
    ReplayError,
    ScheduleError,
    StoreError,
    UnknownElementError,
)

logger = logging.getLogger(__name__)

# Most specific classes first
EXIT_CODES = (
    (ConflictPolicyError, EXIT_CONFLICT),
    (BudgetExceeded, EXIT_BUDGET),
    (CompositionConflict, EXIT_COMPOSITION),
    (NetValidationError, EXIT_VALIDATION),
    (CapacityViolation, EXIT_VALIDATION),
    (ReplayError, EXIT_VALIDATION),
    (ConfigError, EXIT_IO),
    (ModelParseError, EXIT_IO),
    (UnknownElementError, EXIT_IO),
    (ScheduleError, EXIT_IO),
    (StoreError, EXIT_IO),
    (FixtureNotFoundError, EXIT_IO),
    (OSError, EXIT_IO),
)

METRIC_NAMES = ["ct", "cp", "cie", "coe", "ccontext"]
FORMATS = ["text", "rows", "json"]


def exit_code_for(error: Exception) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(error, cls):
            return code
    return EXIT_VALIDATION


def _fail(error: Exception) -> None:
    if isinstance(error, NetValidationError):
        click.echo("Model is not valid:", err=True)
        for violation in error.violations:
            click.echo(f"  {violation}", err=True)
    else:
        click.echo(f"Error: {error}", err=True)
    sys.exit(exit_code_for(error))


def _emit(text: str, out: Optional[str] = None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
        click.echo(f"Wrote {out}", err=True)
    else:
        click.echo(text, nl=False)


@click.group()
@click.version_option(version=__version__)
@click.option("--config", "-c", "config_path", default=None, help="Path to custom config YAML")
@click.option("--profile", "-p", default=None, help="Config profile (strict, exploratory, ...)")
@click.option("--log-level", default=None,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              help="Diagnostic verbosity on stderr")
@click.pass_context
def main(ctx, config_path, profile, log_level):
    """edpn: swim lane event-driven Petri nets, from model to test suite."""
    from edpn.core.config import AppConfig
    from edpn.core.logging import setup_logging

    try:
        app_config = AppConfig.load(config_path=config_path, profile=profile)
    except ConfigError as e:
        click.echo(f"Error loading config: {e}", err=True)
        sys.exit(EXIT_IO)

    log_cfg = app_config.logging
    setup_logging(
        level=log_level or log_cfg.get("level", "WARNING"),
        log_file=log_cfg.get("file"),
        max_bytes=log_cfg.get("max_bytes", 5_242_880),
        backup_count=log_cfg.get("backup_count", 3),
    )
    ctx.obj = app_config


@main.command()
@click.argument("model")
@click.option("--patterns", is_flag=True, help="Also list recognized communication patterns")
@click.pass_obj
def validate(app_config, model, patterns):
    """Check a model against the structural rules."""
    from edpn.cli.sources import load_net
    from edpn.net.validation import errors
    from edpn.net.validation import validate as validate_net

    try:
        net = load_net(model)
    except (EdpnError, OSError) as e:
        _fail(e)

    violations = validate_net(net, safe=app_config.simulation.safe)
    for violation in violations:
        click.echo(f"{violation.severity.value}: {violation}")

    if patterns:
        from edpn.patterns.recognizers import recognize

        for instance in recognize(net):
            click.echo(f"pattern: {instance.describe()}")

    found = errors(violations)
    if found:
        click.echo(f"{len(found)} error(s)", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(f"{model}: ok")


def _parse_events(value: str) -> list:
    """``p1,p2`` for bare events, ``0:p1,2:p2`` for ticked ones."""
    if not value:
        return []
    items = []
    for token in value.split(","):
        token = token.strip()
        if not token:
            continue
        if ":" in token:
            tick, event = token.split(":", 1)
            try:
                items.append((int(tick), event.strip()))
            except ValueError:
                raise click.BadParameter(f"bad tick in {token!r}", param_hint="--events")
        else:
            items.append(token)
    return items


def _parse_marks(values) -> dict:
    tokens = {}
    for value in values:
        place, _, count = value.partition("=")
        try:
            tokens[place] = int(count) if count else 1
        except ValueError:
            raise click.BadParameter(f"bad token count in {value!r}", param_hint="--mark")
    return tokens


def _format_trace(trace) -> str:
    lines = [f"initial: {trace.initial}"]
    for s in trace.steps:
        consumed = ",".join(s.consumed_events) or "-"
        emitted = ",".join(s.emitted) or "-"
        lines.append(
            f"step {s.step_index + 1}: fire {s.fired} ({s.priority.value}) "
            f"consumes {consumed} emits {emitted} -> {s.marking_after}"
        )
    for lost in trace.lost:
        lines.append(f"lost: {lost.event} at step {lost.step_index + 1} (tick {lost.tick})")
    state = "quiescent" if trace.final_quiescent else "running"
    lines.append(f"final ({state}): {trace.final_marking}")
    return "\n".join(lines) + "\n"


@main.command()
@click.argument("model")
@click.option("--events", "-e", default="", help="Comma-separated input events, e.g. p1,p2 or 0:p1,3:p2")
@click.option("--policy", default=None,
              type=click.Choice(["lexicographic", "error-on-conflict"]),
              help="Conflict policy (default from config)")
@click.option("--event-lifetime", default=None,
              type=click.Choice(["step", "persistent"]),
              help="Lifetime of offered events (default from config)")
@click.option("--mark", "marks", multiple=True, help="Initial marking override PLACE[=N]; repeatable")
@click.option("--table", is_flag=True, help="Print a per-lane execution table")
@click.pass_obj
def simulate(app_config, model, events, policy, event_lifetime, marks, table):
    """Run a model on a sequence of input events."""
    from edpn.cli.sources import load_net
    from edpn.net.model import Marking
    from edpn.net.policies import create_policy
    from edpn.net.simulator import EventLifetime, run
    from edpn.net.validation import ensure_valid
    from edpn.testgen.table import render_execution_table

    sim = app_config.simulation
    schedule = _parse_events(events)
    tokens = _parse_marks(marks)
    try:
        net = ensure_valid(load_net(model), safe=sim.safe)
        initial = None
        if tokens:
            for place in tokens:
                if place not in net.place_map:
                    raise UnknownElementError(place, "place")
            initial = Marking.of(tokens)
        trace = run(
            net,
            schedule=schedule,
            initial=initial,
            policy=create_policy(policy or sim.policy),
            lifetime=EventLifetime(event_lifetime or sim.event_lifetime),
            safe=sim.safe,
            step_budget=sim.step_budget,
        )
    except BudgetExceeded as e:
        if e.partial is not None:
            click.echo(_format_trace(e.partial), nl=False)
        _fail(e)
    except (EdpnError, OSError) as e:
        _fail(e)

    if table:
        click.echo(render_execution_table(net, trace).render(), nl=False)
    else:
        click.echo(_format_trace(trace), nl=False)


@main.command()
@click.argument("store_a")
@click.argument("store_b")
@click.option("--out", "-o", default=None, help="Write the composed store here instead of stdout")
def compose(store_a, store_b, out):
    """Union two relational stores (or models)."""
    from edpn.cli.sources import load_store
    from edpn.store.compose import compose as compose_stores
    from edpn.store.relfile import dump_relations

    try:
        store = compose_stores(load_store(store_a), load_store(store_b))
        _emit(dump_relations(store), out)
    except (EdpnError, OSError) as e:
        _fail(e)


@main.command("gen-tests")
@click.argument("model")
@click.option("--cover", "metric_name", default="ct",
              type=click.Choice(METRIC_NAMES, case_sensitive=False), help="Coverage metric to satisfy")
@click.option("--max-firings", type=int, default=None, help="Longest path considered (default from config)")
@click.option("--format", "fmt", default="text", type=click.Choice(FORMATS), help="Output format")
@click.option("--out", "-o", default=None, help="Write the test suite here instead of stdout")
@click.pass_obj
def gen_tests(app_config, model, metric_name, max_firings, fmt, out):
    """Generate test cases for one coverage metric."""
    from edpn.cli.sources import load_net
    from edpn.coverage.metrics import Metric, render_report
    from edpn.net.simulator import EventLifetime
    from edpn.net.validation import ensure_valid
    from edpn.testgen.cases import dump_json, dump_rows, render_test_cases
    from edpn.testgen.generate import generate_for_coverage

    gen = app_config.generation
    try:
        net = ensure_valid(load_net(model), safe=app_config.simulation.safe)
        result = generate_for_coverage(
            net,
            Metric.parse(metric_name),
            max_firings=max_firings or gen.max_firings,
            restart_from_stable=gen.restart_from_stable,
            state_budget=gen.state_budget,
            lifetime=EventLifetime(app_config.simulation.event_lifetime),
            safe=app_config.simulation.safe,
        )
    except (EdpnError, OSError, ValueError) as e:
        _fail(e)

    if fmt == "rows":
        _emit(dump_rows(result.test_cases), out)
    elif fmt == "json":
        _emit(dump_json(result.test_cases), out)
    else:
        _emit(render_test_cases(result.test_cases, net) + "\n" + render_report(result.coverage), out)

    if fmt != "text":
        click.echo(render_report(result.coverage), err=True, nl=False)
    if result.budget_exhausted:
        click.echo("Warning: state budget exhausted; some paths were not explored", err=True)
    if not result.complete:
        sys.exit(EXIT_VALIDATION)


@main.command()
@click.argument("model")
@click.argument("tests")
@click.option("--metric", "metric_names", multiple=True,
              type=click.Choice(METRIC_NAMES, case_sensitive=False),
              help="Metric to report; repeatable (default: all)")
@click.option("--format", "fmt", default="text", type=click.Choice(FORMATS), help="Output format")
@click.pass_obj
def coverage(app_config, model, tests, metric_names, fmt):
    """Measure what a test suite covers."""
    from edpn.cli.sources import load_net, read_source
    from edpn.coverage.metrics import Metric, measure, render_report, report_json, report_rows
    from edpn.net.simulator import EventLifetime
    from edpn.net.validation import ensure_valid
    from edpn.testgen.cases import load_test_cases

    metrics = tuple(Metric.parse(m) for m in metric_names) or tuple(Metric)
    try:
        net = ensure_valid(load_net(model), safe=app_config.simulation.safe)
        suite = load_test_cases(read_source(tests), source=tests)
        report = measure(
            net,
            suite,
            metrics=metrics,
            lifetime=EventLifetime(app_config.simulation.event_lifetime),
            safe=app_config.simulation.safe,
        )
    except (EdpnError, OSError) as e:
        _fail(e)

    render = {"text": render_report, "rows": report_rows, "json": report_json}[fmt]
    click.echo(render(report), nl=False)


@main.command()
@click.argument("model")
@click.option("--format", "fmt", default="dot",
              type=click.Choice(["dot", "relational", "model"]), help="Rendering")
@click.option("--out", "-o", default=None, help="Write here instead of stdout")
def export(model, fmt, out):
    """Render a valid model as DOT, relational or model text."""
    from edpn.cli.sources import load_net
    from edpn.export.dot import to_dot
    from edpn.net.modelfile import dump_model
    from edpn.net.validation import ensure_valid
    from edpn.store.relations import to_relations
    from edpn.store.relfile import dump_relations

    try:
        net = ensure_valid(load_net(model))
        if fmt == "dot":
            text = to_dot(net)
        elif fmt == "relational":
            text = dump_relations(to_relations(net))
        else:
            text = dump_model(net)
        _emit(text, out)
    except (EdpnError, OSError) as e:
        _fail(e)


@main.command()
@click.argument("name", required=False)
def fixtures(name):
    """List embedded models, or print one."""
    from edpn.fixtures import catalog
    from edpn.net.modelfile import dump_model

    if name is None:
        width = max(len(n) for n in catalog.available())
        for n in catalog.available():
            click.echo(f"{n.ljust(width)}  {catalog.CATALOG[n]}")
        return
    try:
        click.echo(dump_model(catalog.load(name)), nl=False)
    except EdpnError as e:
        _fail(e)


@main.command()
def patterns():
    """List the communication pattern kinds and their role names."""
    from edpn.patterns.recognizers import registry

    click.echo(registry.describe())


if __name__ == "__main__":
    main()
