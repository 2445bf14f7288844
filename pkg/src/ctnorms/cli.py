"""Command-line front end.

Exit status: 0 on success, 1 when a verification row fails, 2 on bad input
or a domain/solver error.
"""

from __future__ import annotations

import csv
import dataclasses
import functools
import io
import json
import math
import sys
from typing import Callable, Optional

import click

from . import bounds, norms, reports, roots
from .errors import CTNormsError
from .special import PrecisionPolicy, check_exponent

EXIT_FAILED = 1
EXIT_USAGE = 2


def _text_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".12g")
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not isinstance(v, bool):
        if not math.isfinite(v):
            return _text_value(v) if not math.isnan(v) else "nan"
        return float(format(v, ".12g"))
    return v


def render(rows: list[dict], fmt: str) -> str:
    """Render rows (dicts sharing one key order) as text, csv or json."""
    if fmt == "json":
        data = [{k: _json_value(v) for k, v in row.items()} for row in rows]
        return json.dumps(data, indent=2) + "\n"
    columns = list(rows[0]) if rows else []
    table = [[_text_value(row.get(c)) for c in columns] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(table)
        return buf.getvalue()
    widths = [max([len(c)] + [len(r[i]) for r in table]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines += ["  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in table]
    return "\n".join(lines) + "\n"


def _emit(rows: list[dict], fmt: str, out: Optional[str]):
    text = render(rows, fmt)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


class ExponentType(click.ParamType):
    name = "exponent"

    def convert(self, value, param, ctx):
        if isinstance(value, float):
            return value
        try:
            return check_exponent(value, param.name if param else "p")
        except CTNormsError as exc:
            self.fail(str(exc), param, ctx)


EXPONENT = ExponentType()


def common_options(func: Callable) -> Callable:
    """--format, --out and --min-p-gap; turns library errors into exit 2."""

    @click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]),
                  default="text", show_default=True, help="Output format.")
    @click.option("--out", type=click.Path(dir_okay=False, writable=True),
                  help="Write the report here instead of stdout.")
    @click.option("--min-p-gap", type=click.FloatRange(min=0, min_open=True),
                  default=1e-6, show_default=True,
                  help="Smallest p - 1 accepted by zeta-based quantities.")
    @functools.wraps(func)
    def wrapper(*args, fmt, out, min_p_gap, **kwargs):
        policy = PrecisionPolicy(min_p_gap=min_p_gap)
        try:
            rows, status = func(*args, policy=policy, **kwargs)
        except CTNormsError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        _emit(rows, fmt, out)
        if status:
            sys.exit(status)

    return wrapper


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Norms, bounds and thresholds for the Cauchy-Toeplitz matrices
    T_n = [2 / (1 + 2(i - j))]."""


@main.command()
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--p", type=EXPONENT, required=True)
@click.option("--q", type=EXPONENT, default=None, help="Omit for the entrywise l_p norm.")
@click.option("--oracle", is_flag=True, help="Use brute-force entry summation.")
@common_options
def norm(n, p, q, oracle, policy):
    """||T_n||_p, or ||T_n||_{p,q} when --q is given."""
    if oracle:
        value = norms.oracle_norm(n, p, q)
    elif q is None:
        value = norms.norm_p(n, p)
    else:
        value = norms.norm_pq(n, p, q)
    expo = p if q is None else q
    stat = value.value if math.isinf(expo) else value.value * n ** (-1 / expo)
    return [{"kind": value.kind, "n": n, "p": p, "q": q, "value": value.value,
             "statistic": stat}], 0


@main.command()
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--p", type=click.FloatRange(min=1, min_open=True), required=True)
@common_options
def bound(n, p, policy):
    """Zeta bound and size-dependent bounds on n^(-1/p) ||T_n||_p."""
    reps = [("zeta", bounds.bozkurt_report(n, p, policy))]
    if n >= 2:
        reps.append(("size_dependent", bounds.thm2_bounds(n, p, policy)))
    rows = [{
        "bound": name, "n": n, "p": p, "lower": r.lower, "statistic": r.statistic,
        "upper": r.upper, "contained": r.contained, "vacuous": r.vacuous,
    } for name, r in reps]
    return rows, 0


ROOT_NAMES = ("delta", "mu", "delta_p", "eta", "epsilon")


@main.command()
@click.argument("name", type=click.Choice(ROOT_NAMES))
@click.option("--p", type=float, default=None, help="Needed by delta_p and eta.")
@click.option("--n", type=click.IntRange(min=1), default=None,
              help="Needed by eta and epsilon.")
@common_options
def root(name, p, n, policy):
    """Solve for a crossover constant.

    delta and mu take no options, delta_p needs --p, eta needs --p and --n,
    epsilon (where the zeta lower bound stops failing) needs --n.
    """
    need = {"delta_p": ("p",), "eta": ("p", "n"), "epsilon": ("n",)}.get(name, ())
    given = {"p": p, "n": n}
    missing = [f"--{k}" for k in need if given[k] is None]
    if missing:
        raise click.UsageError(f"root {name} needs {', '.join(missing)}")
    if name == "delta":
        res = roots.find_delta()
    elif name == "mu":
        res = roots.find_mu(policy)
    elif name == "delta_p":
        res = roots.find_delta_p(p)
    elif name == "eta":
        res = roots.find_eta(p, n, policy)
    else:
        res = roots.bozkurt_lower_threshold(n, policy)
    return [{
        "name": name, "p": p, "n": n, "value": res.value, "residual": res.residual,
        "iterations": res.iterations, "converged": res.converged,
        "bracket_lo": res.bracket[0], "bracket_hi": res.bracket[1],
    }], 0


@main.command()
@click.option("--p", type=float, multiple=True, required=True,
              help="Repeat for several exponents.")
@click.option("--max-n", type=click.IntRange(min=2), default=roots.MAX_THRESHOLD_N,
              show_default=True)
@common_options
def thresholds(p, max_n, policy):
    """Largest orders N1, N2 below the upper conjecture constant."""
    rows = []
    for x in sorted(set(p)):
        pair = roots.find_thresholds(x, policy, max_n)
        rows.append({"p": x, "n1": pair.n1, "n2": pair.n2})
    return rows, 0


@main.command()
@click.argument("table_id", type=click.IntRange(1, 3), required=False)
@click.option("--table", "table_opt", type=click.IntRange(1, 3), default=None)
@click.option("--tol", type=click.FloatRange(min=0), default=None,
              help="Override the per-table tolerance.")
@common_options
def table(table_id, table_opt, tol, policy):
    """Reproduce golden table 1, 2 or 3."""
    if table_id is None:
        table_id = table_opt
    if table_id is None:
        raise click.UsageError("give a table id (1, 2 or 3)")
    art = reports.reproduce_table(table_id, tol=tol, policy=policy)
    return art.records(), 0 if art.passed else EXIT_FAILED


@main.command()
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--p", type=EXPONENT, required=True)
@click.option("--q", type=EXPONENT, required=True)
@common_options
def classify(n, p, q, policy):
    """Predicted vs observed direction of the conjectured inequality at (n, p, q)."""
    v = roots.classify_region(n, p, q, policy)
    row = {"n": v.n, "p": v.p, "q": v.q, "case": v.case_label, "predicted": v.predicted,
           "observed": v.observed, "statistic": v.statistic, "constant": v.constant,
           "agree": v.agree}
    return [row], 0 if v.agree else EXIT_FAILED


@main.command()
@click.option("--grid", "grid_spec", default="", metavar="SPEC",
              help="e.g. 'suites=sandwich;n=2..50;p=1.1,2'. Defaults cover every suite.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=click.IntRange(min=0), default=1, show_default=True,
              help="Worker processes; 0 = one per CPU.")
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=None,
              help="Relative tolerance for oracle comparisons.")
@click.option("--max-witnesses", type=click.IntRange(min=0), default=20, show_default=True)
@common_options
def verify(grid_spec, seed, jobs, tol, max_witnesses, policy):
    """Run the invariant suites and report counts plus failure witnesses."""
    try:
        grid = reports.parse_grid(grid_spec)
        if tol is not None:
            grid = dataclasses.replace(grid, tol=tol)
    except CTNormsError as exc:
        raise click.BadParameter(str(exc), param_hint="--grid") from None
    report = reports.verify_all(grid, seed=seed, jobs=jobs)
    rows = []
    for s in report.suites:
        rows.append({"kind": "summary", "suite": s.suite, "check": "", "inputs": "",
                     "lhs": None, "rhs": None, "checks": s.checks,
                     "failures": len(s.failures)})
    for s in report.suites:
        for f in s.failures[:max_witnesses]:
            rows.append({"kind": "failure", "suite": f.suite, "check": f.check,
                         "inputs": f.inputs, "lhs": f.lhs, "rhs": f.rhs,
                         "checks": None, "failures": None})
    return rows, EXIT_FAILED if report.failure_count else 0


if __name__ == "__main__":
    main()
