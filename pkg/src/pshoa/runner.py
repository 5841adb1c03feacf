"""End-to-end experiment execution: both pipelines, all files, one config."""
from __future__ import annotations

import os

import numpy as np

from . import io
from .config import ExperimentConfig
from .errors import DomainError
from .experiment import (
    grid_points,
    make_field_grid,
    run_sphere_pipeline,
    run_spheroid_pipeline,
    sweet_spot,
)
from .geometry import PlaneWave, build_sphere_array, build_spheroid_array, spheroid_from_radii
from .swf import SwfContext, build_context, cache_path, load_tables


def spheroid_params(cfg: ExperimentConfig):
    return spheroid_from_radii(cfg.spheroid_r_long, cfg.spheroid_r_short)


def context_c(cfg: ExperimentConfig) -> float:
    return cfg.wavenumber * spheroid_params(cfg).a


def context_n_internal(cfg: ExperimentConfig) -> int:
    return max(cfg.n_sim, cfg.transcode_sum, cfg.order)


def build_experiment_context(cfg: ExperimentConfig, cache_dir: str | None) -> SwfContext:
    return build_context(context_c(cfg), order=cfg.order, n_internal=context_n_internal(cfg),
                         precision=cfg.precision, dps=cfg.dps, cache_dir=cache_dir,
                         threads=cfg.threads)


def require_cached_context(cfg: ExperimentConfig, cache_dir: str | None) -> SwfContext:
    """Load the table cache for the config, or explain how to create it."""
    c = context_c(cfg)
    n_int = context_n_internal(cfg)
    path = cache_path(cache_dir or ".", c, n_int, cfg.precision)
    if not os.path.exists(path):
        raise DomainError(
            f"no cached tables at {path}; run "
            f"`pshoa tables --config <config> --cache {cache_dir or '.'}` first"
        )
    return load_tables(path)


def plane_wave(cfg: ExperimentConfig) -> PlaneWave:
    return PlaneWave.from_frequency(cfg.frequency, cfg.incidence, cfg.sound_speed)


def run_experiment(cfg: ExperimentConfig, out_dir: str, cache_dir: str | None = None,
                   ctx: SwfContext | None = None) -> dict:
    """Run both pipelines for the config and write every artifact.

    Produces, under out_dir with the config's label as prefix: the resolved
    config, encoded coefficient files for both pipelines (the spheroidal one
    already transcoded to spherical, global frame), the ground-truth grid,
    both evaluation grids with SDR, the sweet-spot metrics summary, and a
    gnuplot script.

    A prebuilt table context can be passed to share work across runs at the
    same spheroidal parameter.

    Returns a dict with the metrics and file paths.
    """
    os.makedirs(out_dir, exist_ok=True)
    label = cfg.label
    pw = plane_wave(cfg)
    xs, ys = grid_points(cfg.grid_extent, cfg.grid_count)
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    points = np.column_stack([xg.ravel(), yg.ravel(), np.zeros(xg.size)])

    if ctx is None:
        ctx = build_experiment_context(cfg, cache_dir)

    sphere_arr = build_sphere_array(cfg.sphere_radius, *cfg.sphere_grid)
    hoa_coeffs, hoa_rec = run_sphere_pipeline(pw, sphere_arr, cfg.order, cfg.sigma,
                                              points, n_sim=cfg.n_sim)
    hoa_grid = make_field_grid(pw, sphere_arr, hoa_rec, xs, ys)
    hoa_metrics = sweet_spot(hoa_grid, cfg.threshold_db)

    spheroid_arr = build_spheroid_array(spheroid_params(cfg), *cfg.spheroid_grid,
                                        long_axis=cfg.long_axis)
    _, ps_coeffs, ps_rec = run_spheroid_pipeline(pw, spheroid_arr, ctx, cfg.order, cfg.sigma,
                                                 cfg.transcode_sum, points, n_sim=cfg.n_sim)
    ps_grid = make_field_grid(pw, spheroid_arr, ps_rec, xs, ys)
    ps_metrics = sweet_spot(ps_grid, cfg.threshold_db)

    files = {}

    def emit(tag, filename, writer, *args):
        path = os.path.join(out_dir, filename)
        writer(path, *args)
        files[tag] = path

    emit("config", f"{label}_config.json", lambda p: cfg.save(p))
    emit("hoa_coeffs", f"{label}_hoa_coeffs.txt", io.save_spherical_coeffs, hoa_coeffs)
    emit("pshoa_coeffs", f"{label}_pshoa_coeffs.txt", io.save_spherical_coeffs, ps_coeffs)
    emit("truth_grid", f"{label}_truth_grid.txt",
         lambda p: io.save_pressure_grid(p, xs, ys, pw.k, hoa_grid.p_true))
    emit("hoa_grid", f"{label}_hoa_grid.txt", io.save_field_grid, hoa_grid)
    emit("pshoa_grid", f"{label}_pshoa_grid.txt", io.save_field_grid, ps_grid)
    emit("metrics", f"{label}_metrics.txt", io.save_metrics,
         [(label, "hoa", hoa_metrics), (label, "pshoa", ps_metrics)])
    emit("plots", f"{label}_plots.gp", io.write_plot_script, label,
         f"{label}_truth_grid.txt", f"{label}_hoa_grid.txt", f"{label}_pshoa_grid.txt",
         cfg.threshold_db)

    return {
        "files": files,
        "hoa": hoa_metrics,
        "pshoa": ps_metrics,
        "hoa_coeffs": hoa_coeffs,
        "pshoa_coeffs": ps_coeffs,
    }
