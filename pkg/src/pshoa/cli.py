"""Command-line interface.

Subcommands cover the full pipeline (`experiment`) and its individual
stages (`tables`, `simulate`, `encode`, `transcode`, `reconstruct`,
`evaluate`) so intermediate artifacts can be inspected or recombined.
Failures exit nonzero with a message tagged by the failing stage.
"""
from __future__ import annotations

import functools
import os

import click
import numpy as np

from . import io
from .config import ExperimentConfig, preset, with_overrides
from .errors import ConvergenceError, DomainError
from .experiment import grid_points, interior_mask, make_field_grid, sdr_map, simulate_observation, sweet_spot
from .geometry import build_sphere_array, build_spheroid_array
from .runner import (
    build_experiment_context,
    context_c,
    context_n_internal,
    plane_wave,
    require_cached_context,
    run_experiment,
    spheroid_params,
)
from .swf import build_context


def _stage(name):
    """Convert library errors into stage-tagged CLI failures."""

    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except (DomainError, ConvergenceError, OSError) as exc:
                raise click.ClickException(f"[{name}] {exc}") from exc

        return wrapper

    return deco


def _load_config(config_path, preset_name):
    if (config_path is None) == (preset_name is None):
        raise DomainError("pass exactly one of --config or --preset")
    if preset_name is not None:
        return preset(preset_name)
    return ExperimentConfig.load(config_path)


config_opt = click.option("--config", "config_path", type=click.Path(exists=True),
                          default=None, help="Experiment config JSON.")
preset_opt = click.option("--preset", "preset_name",
                          type=click.Choice(["fig2", "fig3", "fig4"]), default=None,
                          help="Built-in configuration (three incidence directions).")
cache_opt = click.option("--cache", "cache_dir", type=click.Path(), default=None,
                         help="Directory for spheroidal wave function table caches.")
threads_opt = click.option("--threads", type=int, default=None,
                           help="Worker processes for table building.")
precision_opt = click.option("--precision", type=click.Choice(["double", "extended"]),
                             default=None, help="Table precision mode.")


@click.group()
@click.version_option()
def main():
    """Prolate spheroidal ambisonics: encoding, transcoding and evaluation."""


@main.command()
@config_opt
@preset_opt
@click.option("--c", "c_value", type=float, default=None,
              help="Spheroidal parameter; overrides the config-derived value.")
@click.option("--order", type=int, default=None, help="Encoding order N.")
@click.option("--n-internal", type=int, default=None,
              help="Highest table degree (defaults to the config's needs).")
@click.option("--dps", type=int, default=None, help="Digits for extended precision.")
@cache_opt
@threads_opt
@precision_opt
@_stage("tables")
def tables(config_path, preset_name, c_value, order, n_internal, dps, cache_dir,
           threads, precision):
    """Build and cache spheroidal wave function tables."""
    cfg = _load_config(config_path, preset_name)
    cfg = with_overrides(cfg, precision=precision, threads=threads, dps=dps)
    c = c_value if c_value is not None else context_c(cfg)
    order_eff = order if order is not None else cfg.order
    n_int = n_internal if n_internal is not None else max(context_n_internal(cfg), order_eff)
    if cache_dir is None:
        raise DomainError("--cache is required (the point of this command is the cache)")
    ctx = build_context(c, order=order_eff, n_internal=n_int, precision=cfg.precision,
                        dps=cfg.dps, cache_dir=cache_dir, threads=cfg.threads)
    click.echo(f"cached {len(ctx.tables)} tables for c={c:.12g} up to degree {n_int} "
               f"({cfg.precision}) in {cache_dir}")


@main.command()
@config_opt
@preset_opt
@click.option("--out", "out_dir", type=click.Path(), required=True)
@cache_opt
@_stage("simulate")
def simulate(config_path, preset_name, out_dir, cache_dir):
    """Simulated microphone pressures for both arrays."""
    cfg = _load_config(config_path, preset_name)
    os.makedirs(out_dir, exist_ok=True)
    pw = plane_wave(cfg)
    sphere_arr = build_sphere_array(cfg.sphere_radius, *cfg.sphere_grid)
    p_s = simulate_observation(pw, sphere_arr, n_sim=cfg.n_sim)
    io.save_pressures(os.path.join(out_dir, f"{cfg.label}_sphere_pressures.txt"), p_s, pw.k,
                      label="sphere pressures")
    io.save_geometry(os.path.join(out_dir, f"{cfg.label}_sphere_geometry.txt"), sphere_arr)
    ctx = require_cached_context(cfg, cache_dir)
    spheroid_arr = build_spheroid_array(spheroid_params(cfg), *cfg.spheroid_grid,
                                        long_axis=cfg.long_axis)
    p_p = simulate_observation(pw, spheroid_arr, ctx=ctx, n_sim=cfg.n_sim)
    io.save_pressures(os.path.join(out_dir, f"{cfg.label}_spheroid_pressures.txt"), p_p, pw.k,
                      label="spheroid pressures")
    io.save_geometry(os.path.join(out_dir, f"{cfg.label}_spheroid_geometry.txt"), spheroid_arr)
    click.echo(f"wrote pressures and geometry for {cfg.label} to {out_dir}")


@main.command()
@config_opt
@preset_opt
@click.option("--pressures", "pressures_path", type=click.Path(exists=True), required=True)
@click.option("--kind", type=click.Choice(["spherical", "spheroidal"]), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@cache_opt
@_stage("encode")
def encode(config_path, preset_name, pressures_path, kind, out_path, cache_dir):
    """Encode a pressures file into basis coefficients."""
    from .spherical import encode_spherical
    from .spheroidal import encode_spheroidal

    cfg = _load_config(config_path, preset_name)
    values, k = io.load_pressures(pressures_path)
    if kind == "spherical":
        arr = build_sphere_array(cfg.sphere_radius, *cfg.sphere_grid)
        coeffs = encode_spherical(values, arr, cfg.order, k, cfg.sigma)
        io.save_spherical_coeffs(out_path, coeffs)
    else:
        ctx = require_cached_context(cfg, cache_dir)
        arr = build_spheroid_array(spheroid_params(cfg), *cfg.spheroid_grid,
                                   long_axis=cfg.long_axis)
        coeffs = encode_spheroidal(values, arr, ctx, cfg.order, cfg.sigma)
        io.save_spheroidal_coeffs(out_path, coeffs)
    click.echo(f"encoded {kind} coefficients to {out_path}")


@main.command("transcode")
@config_opt
@preset_opt
@click.option("--coeffs", "coeffs_path", type=click.Path(exists=True), required=True,
              help="Spheroidal coefficient file (local frame).")
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--n-sum", type=int, default=None, help="Internal degree cap of the sum.")
@cache_opt
@_stage("transcode")
def transcode_cmd(config_path, preset_name, coeffs_path, out_path, n_sum, cache_dir):
    """Convert spheroidal coefficients to spherical ones (global frame)."""
    from .spherical import rotate_coeffs
    from .geometry import rotation_for_long_axis
    from .transcode import transcode

    cfg = _load_config(config_path, preset_name)
    ctx = require_cached_context(cfg, cache_dir)
    sph = io.load_spheroidal_coeffs(coeffs_path)
    local = transcode(sph, ctx, order_out=cfg.order,
                      n_sum=n_sum if n_sum is not None else cfg.transcode_sum)
    out = rotate_coeffs(local, rotation_for_long_axis(cfg.long_axis))
    io.save_spherical_coeffs(out_path, out)
    click.echo(f"transcoded to {out_path}")


@main.command()
@config_opt
@preset_opt
@click.option("--coeffs", "coeffs_path", type=click.Path(exists=True), default=None,
              help="Spherical coefficient file (global frame).")
@click.option("--analytic", is_flag=True, default=False,
              help="Write the exact incident plane-wave field instead.")
@click.option("--out", "out_path", type=click.Path(), required=True)
@_stage("reconstruct")
def reconstruct(config_path, preset_name, coeffs_path, analytic, out_path):
    """Evaluate a coefficient file (or the exact field) on the config grid."""
    from .spherical import reconstruct_field

    cfg = _load_config(config_path, preset_name)
    pw = plane_wave(cfg)
    xs, ys = grid_points(cfg.grid_extent, cfg.grid_count)
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    points = np.column_stack([xg.ravel(), yg.ravel(), np.zeros(xg.size)])
    if analytic:
        values = np.exp(1j * points @ (pw.k * np.asarray(pw.direction)))
        k = pw.k
    else:
        if coeffs_path is None:
            raise DomainError("pass --coeffs or --analytic")
        coeffs = io.load_spherical_coeffs(coeffs_path)
        values = reconstruct_field(coeffs, points)
        k = coeffs.k
    io.save_pressure_grid(out_path, xs, ys, k, values)
    click.echo(f"wrote grid to {out_path}")


@main.command()
@config_opt
@preset_opt
@click.option("--truth", "truth_path", type=click.Path(exists=True), required=True)
@click.option("--recon", "recon_path", type=click.Path(exists=True), required=True)
@click.option("--array", "array_kind", type=click.Choice(["sphere", "spheroid"]),
              required=True, help="Baffle whose interior is flagged.")
@click.option("--out-grid", type=click.Path(), required=True)
@click.option("--out-metrics", type=click.Path(), required=True)
@click.option("--threshold", type=float, default=None, help="Sweet-spot threshold in dB.")
@_stage("evaluate")
def evaluate(config_path, preset_name, truth_path, recon_path, array_kind, out_grid,
             out_metrics, threshold):
    """SDR map and sweet-spot metrics from a truth grid and a reconstruction grid."""
    from .experiment import FieldGrid

    cfg = _load_config(config_path, preset_name)
    thr = threshold if threshold is not None else cfg.threshold_db
    xs, ys, k, p_true, frame = io.load_pressure_grid(truth_path)
    xs2, ys2, _, p_rec, _ = io.load_pressure_grid(recon_path)
    if len(xs) != len(xs2) or len(ys) != len(ys2):
        raise DomainError("truth and reconstruction grids have different shapes")
    if array_kind == "sphere":
        arr = build_sphere_array(cfg.sphere_radius, *cfg.sphere_grid)
    else:
        arr = build_spheroid_array(spheroid_params(cfg), *cfg.spheroid_grid,
                                   long_axis=cfg.long_axis)
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    points = np.column_stack([xg.ravel(), yg.ravel(), np.zeros(xg.size)])
    grid = FieldGrid(xs=xs, ys=ys, k=k, frame=frame, p_true=p_true, p_rec=p_rec,
                     sdr_db=sdr_map(p_true, p_rec), interior=interior_mask(arr, points))
    metrics = sweet_spot(grid, thr)
    io.save_field_grid(out_grid, grid)
    io.save_metrics(out_metrics, [(cfg.label, array_kind, metrics)])
    click.echo(f"width_x={metrics.width_x:.3f} m width_y={metrics.width_y:.3f} m "
               f"area={metrics.area_m2:.3f} m^2")


@main.command()
@config_opt
@preset_opt
@click.option("--out", "out_dir", type=click.Path(), required=True)
@cache_opt
@threads_opt
@precision_opt
@_stage("experiment")
def experiment(config_path, preset_name, out_dir, cache_dir, threads, precision):
    """Full pipeline: simulate, encode, transcode, reconstruct, evaluate, emit files."""
    cfg = _load_config(config_path, preset_name)
    cfg = with_overrides(cfg, threads=threads, precision=precision)
    result = run_experiment(cfg, out_dir, cache_dir)
    for pipeline in ("hoa", "pshoa"):
        m = result[pipeline]
        click.echo(f"{pipeline}: width_x={m.width_x:.3f} m width_y={m.width_y:.3f} m "
                   f"area={m.area_m2:.3f} m^2 origin SDR={m.sdr_origin_db:.1f} dB")
    click.echo(f"wrote {len(result['files'])} files to {out_dir}")


if __name__ == "__main__":
    main()
