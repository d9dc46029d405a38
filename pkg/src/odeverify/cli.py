"""Command-line client for the odeverify service.

The CLI is a thin client: it assembles an experiment configuration from
flags and/or a config file, posts it to the service, and writes the
returned results as CSV files plus the resolved configuration.  By
default it talks to an in-process instance of the service over an ASGI
transport (no network, no separate process); ``--server URL`` or the
ODEVERIFY_SERVER environment variable points it at a remote instance
started with ``odeverify serve``.

Exit codes: 0 success (converged where applicable), 1 completed but not
converged, 2 usage/configuration error.
"""

from __future__ import annotations

import asyncio
import sys
from pathlib import Path

import click
import httpx

from .config import ExperimentConfig, dumps_config, load_config
from .errors import OdeVerifyError
from .reports import (
    classification_csv,
    fig1_plot_script,
    fig2_plot_script,
    fmt,
    key_value_block,
    ladder_csv,
    order_points_csv,
    sampled_csv,
    series_csv,
)


@click.group()
@click.option(
    "--server",
    envvar="ODEVERIFY_SERVER",
    default=None,
    metavar="URL",
    help="Base URL of a running odeverify service; default is in-process.",
)
@click.version_option(package_name="odeverify")
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Integrate ODE systems and verify that transients are convergent."""
    ctx.obj = {"server": server}


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


async def _request_async(server: str | None, method: str, path: str, payload: dict | None):
    if server:
        async with httpx.AsyncClient(base_url=server, timeout=None) as client:
            return await client.request(method, path, json=payload)
    from .service import app  # deferred: keeps --help fast

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(
        transport=transport, base_url="http://odeverify.internal", timeout=None
    ) as client:
        return await client.request(method, path, json=payload)


def _request(ctx: click.Context, method: str, path: str, payload: dict | None = None) -> dict:
    try:
        response = asyncio.run(_request_async(ctx.obj["server"], method, path, payload))
    except httpx.HTTPError as exc:
        _fail(f"cannot reach service: {exc}")
    if response.status_code == 400:
        body = response.json()
        _fail(body.get("detail", response.text))
    if response.status_code == 422:
        _fail(f"invalid request: {response.text}")
    if response.status_code >= 500:
        _fail(f"service error {response.status_code}: {response.text}")
    return response.json()


def _build_payload(config_path: str | None, **flags) -> dict:
    payload: dict = {}
    if config_path is not None:
        try:
            payload = load_config(config_path).model_dump(exclude_none=True)
        except OdeVerifyError as exc:
            _fail(str(exc))
    payload.pop("command", None)
    for key, value in flags.items():
        if value is not None:
            payload[key] = value
    return payload


def _out_dir(explicit: str | None, command: str) -> Path:
    path = Path(explicit) if explicit else Path(f"odeverify-{command}")
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write(directory: Path, name: str, content: str) -> None:
    path = directory / name
    path.write_text(content)
    click.echo(f"wrote {path}")


def _write_config(directory: Path, config_data: dict, out_dir: Path) -> None:
    config_data = dict(config_data)
    config_data["out_dir"] = str(out_dir)
    cfg = ExperimentConfig.model_validate(config_data)
    _write(directory, "config.txt", dumps_config(cfg))


# reusable option declarations
_opt_config = click.option(
    "--config", "config_path", type=click.Path(exists=True, dir_okay=False),
    default=None, help="Flat 'key = value' config file; flags override it.",
)
_opt_model = click.option("--model", default=None, help="Model name (see 'models').")
_opt_u0 = click.option("--u0", default=None, metavar="X1,X2,...", help="Initial state override.")
_opt_method = click.option("--method", default=None, help="euler | rk4 | taylor:<p>")
_opt_dt = click.option("--dt", type=float, default=None, help="Step size.")
_opt_t_end = click.option("--t-end", type=float, default=None, help="Integration horizon.")
_opt_out_interval = click.option(
    "--out-interval", type=float, default=None,
    help="Sampling interval; integer multiple of dt.",
)
_opt_norm = click.option("--norm", default=None, help="inf | euclidean | component:<i>")
_opt_out_dir = click.option(
    "--out-dir", default=None, envvar="ODEVERIFY_OUT_DIR",
    help="Output directory (default: ODEVERIFY_OUT_DIR or ./odeverify-<command>).",
)


@main.command()
@click.pass_context
def models(ctx: click.Context) -> None:
    """List the registered models."""
    for info in _request(ctx, "GET", "/models"):
        exact = "exact solution" if info["has_exact_solution"] else "no exact solution"
        state = ",".join(fmt(x) for x in info["default_initial_state"])
        click.echo(f"{info['name']}  n={info['dimension']}  u0=({state})  {exact}")


@main.command()
@_opt_config
@_opt_model
@_opt_u0
@_opt_method
@_opt_dt
@_opt_t_end
@_opt_out_interval
@_opt_norm
@_opt_out_dir
@click.pass_context
def run(ctx, config_path, model, u0, method, dt, t_end, out_interval, norm, out_dir):
    """Integrate one model and write the trajectory CSV."""
    payload = _build_payload(
        config_path, model=model, u0=u0, method=method, dt=dt,
        t_end=t_end, out_interval=out_interval, norm=norm,
    )
    data = _request(ctx, "POST", "/run", payload)
    out = _out_dir(out_dir, "run")
    traj = data["trajectory"]
    _write(out, "trajectory.csv", sampled_csv(traj["times"], traj["states"]))
    _write(out, "summary.txt", key_value_block({
        "model": traj["model"],
        "method": traj["method"],
        "dt": traj["dt"],
        "output_interval": traj["output_interval"],
        "samples": len(traj["times"]),
        "terminated_early": traj["terminated_early"],
    }, title="run summary"))
    _write_config(out, data["config"], out)
    if traj["terminated_early"]:
        click.echo(f"run terminated early: {traj['terminated_early']}")


@main.command()
@_opt_config
@_opt_model
@_opt_u0
@_opt_method
@click.option("--method2", default=None, help="Second method for the cross check.")
@_opt_dt
@_opt_t_end
@_opt_out_interval
@_opt_norm
@click.option("--threshold", type=float, default=None, help="Divergence threshold.")
@_opt_out_dir
@click.pass_context
def compare(ctx, config_path, model, u0, method, method2, dt, t_end, out_interval,
            norm, threshold, out_dir):
    """Run two different methods at one step size and diff them."""
    payload = _build_payload(
        config_path, model=model, u0=u0, method=method, method2=method2, dt=dt,
        t_end=t_end, out_interval=out_interval, norm=norm, threshold=threshold,
    )
    data = _request(ctx, "POST", "/compare", payload)
    out = _out_dir(out_dir, "compare")
    diff = data["difference"]
    _write(out, "difference.csv", series_csv(diff["times"], diff["values"]))
    _write(out, "summary.txt", key_value_block({
        "source_a": diff["source_a"],
        "source_b": diff["source_b"],
        "norm": diff["norm"],
        "max_difference": data["max_difference"],
        "onset": data["onset"],
        "truncated": diff["truncated"],
    }, title="cross-method comparison"))
    _write_config(out, data["config"], out)
    click.echo(f"max difference: {fmt(data['max_difference'])}")


@main.command()
@_opt_config
@_opt_model
@_opt_u0
@_opt_method
@click.option("--dt", type=float, default=None, help="Coarsest step size dt0.")
@_opt_t_end
@_opt_norm
@click.option("--epsilon", type=float, default=None, help="Convergence tolerance.")
@click.option("--ratio", type=int, default=None, help="Step reduction ratio (integer >= 2).")
@click.option("--max-levels", type=int, default=None, help="Maximum ladder levels.")
@_opt_out_dir
@click.pass_context
def refine(ctx, config_path, model, u0, method, dt, t_end, norm, epsilon, ratio,
           max_levels, out_dir):
    """Successively reduce dt until two consecutive runs agree.

    Exits 0 when converged, 1 when the ladder ran out of levels first.
    """
    payload = _build_payload(
        config_path, model=model, u0=u0, method=method, dt=dt, t_end=t_end,
        norm=norm, epsilon=epsilon, ratio=ratio, max_levels=max_levels,
    )
    data = _request(ctx, "POST", "/refine", payload)
    out = _out_dir(out_dir, "refine")
    _write(out, "ladder.csv", ladder_csv(data["ladder"]))
    _write(out, "summary.txt", key_value_block({
        "converged": data["converged"],
        "epsilon": data["epsilon"],
        "final_dt": data["final_dt"],
        "levels": len(data["ladder"]),
    }, title="refinement outcome"))
    _write_config(out, data["config"], out)
    if not data["converged"]:
        click.echo("not converged within max_levels", err=True)
        sys.exit(1)
    click.echo(f"converged at dt = {fmt(data['final_dt'])}")


@main.command()
@_opt_config
@_opt_model
@_opt_u0
@_opt_method
@click.option("--dt-ladder", default=None, metavar="DT1,DT2,...",
              help="Strictly decreasing step-size ladder.")
@click.option("--t-probe", type=float, default=None,
              help="Probe time; integer multiple of every ladder dt.")
@_opt_out_dir
@click.pass_context
def order(ctx, config_path, model, u0, method, dt_ladder, t_probe, out_dir):
    """Estimate the observed convergence order against the exact solution."""
    payload = _build_payload(
        config_path, model=model, u0=u0, method=method,
        dt_ladder=dt_ladder, t_probe=t_probe,
    )
    data = _request(ctx, "POST", "/order", payload)
    out = _out_dir(out_dir, "order")
    _write(out, "points.csv", order_points_csv(data["points"]))
    _write(out, "summary.txt", key_value_block({
        "observed_order": data["order"],
        "points_used": len(data["points"]),
        "dropped_dts": ",".join(fmt(dt) for dt in data["dropped"]),
    }, title="observed order"))
    _write_config(out, data["config"], out)
    click.echo(f"observed order: {fmt(data['order'])}")


@main.command()
@_opt_config
@_opt_model
@_opt_u0
@_opt_method
@_opt_dt
@_opt_t_end
@_opt_out_interval
@_opt_out_dir
@click.pass_context
def stability(ctx, config_path, model, u0, method, dt, t_end, out_interval, out_dir):
    """Classify local stability along a trajectory (CSV: t, max_real_part, class)."""
    payload = _build_payload(
        config_path, model=model, u0=u0, method=method, dt=dt,
        t_end=t_end, out_interval=out_interval,
    )
    data = _request(ctx, "POST", "/stability", payload)
    out = _out_dir(out_dir, "stability")
    _write(out, "classification.csv", classification_csv(data["rows"]))
    counts: dict[str, int] = {}
    for row in data["rows"]:
        counts[row["class"]] = counts.get(row["class"], 0) + 1
    _write(out, "summary.txt", key_value_block(
        {f"samples_{k}": v for k, v in sorted(counts.items())},
        title="local stability classification",
    ))
    _write_config(out, data["config"], out)


@main.command()
@_opt_config
@_opt_u0
@_opt_dt
@click.option("--dt2", type=float, default=None, help="Second step size.")
@_opt_t_end
@_opt_out_dir
@click.pass_context
def fig1(ctx, config_path, u0, dt, dt2, t_end, out_dir):
    """Two Euler step sizes vs the exact linear-decay solution."""
    payload = _build_payload(config_path, u0=u0, dt=dt, dt2=dt2, t_end=t_end)
    data = _request(ctx, "POST", "/fig1", payload)
    out = _out_dir(out_dir, "fig1")
    for key, name in (("run_a", "run_a.csv"), ("run_b", "run_b.csv")):
        traj = data[key]
        _write(out, name, sampled_csv(traj["times"], traj["states"]))
    _write(out, "exact.csv", sampled_csv(data["exact"]["times"], data["exact"]["states"]))
    pair = data["pair_difference"]
    _write(out, "pair_difference.csv", series_csv(pair["times"], pair["values"]))
    for key, name in (("error_a", "error_a.csv"), ("error_b", "error_b.csv")):
        err = data[key]
        _write(out, name, series_csv(err["times"], err["values"]))
    _write(out, "plot_fig1.py", fig1_plot_script())
    _write_config(out, data["config"], out)


@main.command()
@_opt_config
@_opt_u0
@click.option("--scale", type=click.Choice(["desk", "paper"]), default=None,
              help="desk: dt pair (1e-4, 1e-5); paper: (1e-6, 1e-7).")
@_opt_dt
@click.option("--dt2", type=float, default=None, help="Second step size.")
@_opt_t_end
@_opt_out_interval
@_opt_norm
@click.option("--threshold", type=float, default=None, help="Divergence threshold.")
@_opt_out_dir
@click.pass_context
def fig2(ctx, config_path, u0, scale, dt, dt2, t_end, out_interval, norm, threshold, out_dir):
    """Divergence of two step sizes on the chaotic model."""
    payload = _build_payload(
        config_path, u0=u0, scale=scale, dt=dt, dt2=dt2, t_end=t_end,
        out_interval=out_interval, norm=norm, threshold=threshold,
    )
    if payload.get("scale") == "paper":
        click.echo(
            "warning: paper scale steps the system ~5.5e8 times per 50 time "
            "units; expect minutes to tens of minutes",
            err=True,
        )
    data = _request(ctx, "POST", "/fig2", payload)
    out = _out_dir(out_dir, "fig2")
    diff = data["difference"]
    _write(out, "difference.csv", series_csv(diff["times"], diff["values"]))
    report = data["report"]
    entries = {
        "scale": data["scale"],
        "dt_a": data["dt_a"],
        "dt_b": data["dt_b"],
        "norm": report["norm"],
        "threshold": report["threshold"],
        "onset": report["onset"],
        "truncated": diff["truncated"],
    }
    growth = report["growth"]
    if growth is not None:
        entries.update({
            "growth_slope": growth["slope"],
            "growth_window_lo": growth["t_lo"],
            "growth_window_hi": growth["t_hi"],
            "growth_points": growth["n_points"],
            "growth_rms_residual": growth["rms_residual"],
        })
    _write(out, "report.txt", key_value_block(entries, title="divergence report"))
    _write(out, "plot_fig2.py", fig2_plot_script())
    _write_config(out, data["config"], out)
    onset = report["onset"]
    click.echo(f"divergence onset: {fmt(onset) if onset is not None else 'not reached'}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Start the HTTP service."""
    import uvicorn

    uvicorn.run("odeverify.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
