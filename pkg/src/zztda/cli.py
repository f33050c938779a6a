"""Command-line surface: thin adapters over the library operations.

Exit codes: 0 on success, 1 when input data fails validation or checks,
2 on usage errors (bad flags, unknown config keys).
"""

from __future__ import annotations

import functools
import json
import os
from dataclasses import replace

import click

from . import oracle
from .descriptors import grid_csv, write_series_csv
from .errors import ZZTError
from .layerstack import read_layerstack, write_layerstack
from .neighbors import VRCalibration
from .pipeline import PipelineConfig, run, scan_k
from .pruning import prune_layers, sliding_windows
from .synth import KINDS, SynthSpec, generate
from .zigzag import (
    EffectiveImage,
    build_filtration,
    compute_zigzag,
    snapshots,
)
from .pipeline import _layer_complexes


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_json(doc, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dump_json(doc))


def _guarded(fn):
    """Map library validation failures onto exit code 1."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ZZTError as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def _parse_floats(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise click.UsageError(f"{flag} expects comma-separated numbers")


def _parse_ints(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise click.UsageError(f"{flag} expects comma-separated integers")


def _pipeline_options(fn):
    opts = [
        click.option("--config", "config_path", default=None,
                     type=click.Path(exists=True, dir_okay=False),
                     help="JSON file with pipeline configuration keys."),
        click.option("--k", "k_nn", type=int, default=None,
                     help="Neighbors per point for the graph stage."),
        click.option("--m", "m", type=int, default=None,
                     help="Maximum simplex dimension."),
        click.option("--subset-size", type=int, default=None,
                     help="Points per subset block."),
        click.option("--alphas", default=None,
                     help="Comma-separated weight exponents."),
        click.option("--dims", default=None,
                     help="Comma-separated homology dimensions."),
        click.option("--vr-target", type=int, default=None,
                     help="Component-count target enabling edge filtering."),
        click.option("--vr-tolerance", type=int, default=0,
                     help="Allowed deviation from the component target."),
        click.option("--keep-short", is_flag=True, default=False,
                     help="Filter keeps edges at or below the radius instead."),
        click.option("--normalization", default=None,
                     type=click.Choice(["global", "paper_literal"]),
                     help="Birth-frequency denominator convention."),
        click.option("--strict-death", is_flag=True, default=False,
                     help="Treat intervals as dead at their death layer."),
        click.option("--threads", "n_jobs", type=int, default=None,
                     help="Worker process cap."),
        click.option("--cache-dir", default=None,
                     type=click.Path(file_okay=False),
                     help="Directory for content-addressed interval caching."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _build_config(
    config_path, k_nn, m, subset_size, alphas, dims, vr_target,
    vr_tolerance, keep_short, normalization, strict_death, n_jobs, cache_dir,
) -> PipelineConfig:
    try:
        if config_path:
            with open(config_path, "r", encoding="utf-8") as fh:
                cfg = PipelineConfig.from_json_dict(json.load(fh))
        else:
            cfg = PipelineConfig()
        updates = {}
        if k_nn is not None:
            updates["k_nn"] = k_nn
        if m is not None:
            updates["m"] = m
        if subset_size is not None:
            updates["subset_size"] = subset_size
        if alphas is not None:
            updates["alphas"] = _parse_floats(alphas, "--alphas")
        if dims is not None:
            updates["homology_dims"] = _parse_ints(dims, "--dims")
        if vr_target is not None:
            updates["vr"] = VRCalibration(
                beta0_target=vr_target, beta0_tolerance=vr_tolerance
            )
        if keep_short:
            updates["keep_short_edges"] = True
        if normalization is not None:
            updates["normalization"] = normalization
        if strict_death:
            updates["inclusive_death"] = False
        if n_jobs is not None:
            updates["n_jobs"] = n_jobs
        if cache_dir is not None:
            updates["cache_dir"] = cache_dir
        return replace(cfg, **updates)
    except (ValueError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"bad configuration: {exc}") from exc


@click.group()
def cli():
    """Zigzag topology of layer-indexed point clouds."""


@cli.command()
@click.argument("stack", type=click.Path(exists=True, file_okay=False))
@_guarded
def validate(stack):
    """Check a layer-stack directory and print its shape."""
    s = read_layerstack(stack)
    click.echo(
        _dump_json(
            {
                "n_layers": s.n_layers,
                "n_points": s.n_points,
                "dim": s.dim,
                "ok": True,
            }
        ),
        nl=False,
    )


@cli.command()
@click.argument("stack", type=click.Path(exists=True, file_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False),
              help="Output directory for diagram and image files.")
@_pipeline_options
@_guarded
def compute(stack, out, **flags):
    """Compute interval diagrams and effective images per subset."""
    cfg = _build_config(**flags)
    result = run(read_layerstack(stack), cfg)
    os.makedirs(out, exist_ok=True)
    _write_json(
        {
            "config": cfg.to_json_dict(),
            "n_subsets": result.n_subsets,
            "subset_size_used": result.subset_size_used,
        },
        os.path.join(out, "run.json"),
    )
    for i, diagram in enumerate(result.diagrams):
        _write_json(
            diagram.to_json_dict(), os.path.join(out, f"diagram_{i:03d}.json")
        )
    for p, imgs in sorted(result.images.items()):
        for i, img in enumerate(imgs):
            _write_json(
                img.to_json_dict(),
                os.path.join(out, f"image_p{p}_{i:03d}.json"),
            )
    click.echo(f"wrote {result.n_subsets} subset(s) to {out}")


@cli.command()
@click.argument("stack", type=click.Path(exists=True, file_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False),
              help="Output directory for descriptor CSV files.")
@_pipeline_options
@_guarded
def descriptors(stack, out, **flags):
    """Emit per-layer descriptor series as plot-ready CSV files."""
    cfg = _build_config(**flags)
    result = run(read_layerstack(stack), cfg)
    os.makedirs(out, exist_ok=True)
    for p in cfg.homology_dims:
        write_series_csv(
            result.betti_stats[p], os.path.join(out, f"betti_p{p}.csv")
        )
        for alpha in cfg.alphas:
            tag = f"p{p}_alpha{alpha}"
            write_series_csv(
                result.births_stats[p][alpha],
                os.path.join(out, f"births_{tag}.csv"),
            )
            write_series_csv(
                result.zbar_stats[p][alpha],
                os.path.join(out, f"zbar_{tag}.csv"),
            )
    click.echo(f"wrote descriptors for {result.n_subsets} subset(s) to {out}")


@cli.command()
@click.argument("stack", type=click.Path(exists=True, file_okay=False))
@click.option("--threshold", type=float, default=0.9, show_default=True,
              help="Fraction of the maximum a layer must exceed.")
@click.option("--alpha", type=float, default=-1.0, show_default=True,
              help="Weight exponent for the persistence average.")
@click.option("--dim", "dim_", type=int, default=1, show_default=True,
              help="Homology dimension of the criterion.")
@click.option("--out", default=None, type=click.Path(dir_okay=False),
              help="Optional file for the JSON report.")
@_pipeline_options
@_guarded
def prune(stack, threshold, alpha, dim_, out, **flags):
    """Recommend layers to remove from weighted interlayer persistence."""
    cfg = _build_config(**flags)
    cfg = replace(cfg, alphas=(alpha,), homology_dims=(dim_,))
    result = run(read_layerstack(stack), cfg)
    zbar = result.zbar_stats[dim_][alpha]
    report = prune_layers(zbar, threshold=threshold, alpha=alpha)
    doc = report.to_json_dict()
    if out:
        _write_json(doc, out)
    click.echo(_dump_json(doc), nl=False)


@cli.command()
@click.option("--layers", "n_layers", type=int, required=True,
              help="Total number of model layers.")
@click.option("--window", type=int, default=5, show_default=True,
              help="Block width in layers.")
@click.option("--step", type=int, default=2, show_default=True,
              help="Stride between block starts.")
@_guarded
def windows(n_layers, window, step):
    """Print sliding layer blocks for ablation sweeps."""
    try:
        blocks = sliding_windows(n_layers, window, step)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    click.echo(_dump_json(blocks), nl=False)


@cli.command()
@click.argument("image_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("image_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", default=None, type=click.Path(dir_okay=False),
              help="Optional CSV file for the difference grid.")
@_guarded
def diff(image_a, image_b, out):
    """Subtract two mass-normalized effective images element-wise."""
    from .descriptors import epi_difference

    def load(path):
        with open(path, "r", encoding="utf-8") as fh:
            return EffectiveImage.from_json_dict(json.load(fh))

    try:
        grid = epi_difference(load(image_a), load(image_b))
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    text = grid_csv(grid)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    click.echo(text, nl=False)


@cli.command(name="scan-k")
@click.argument("stack", type=click.Path(exists=True, file_okay=False))
@click.option("--k-min", type=int, required=True, help="Smallest k to try.")
@click.option("--k-max", type=int, required=True, help="Largest k to try.")
@_pipeline_options
@_guarded
def scan_k_cmd(stack, k_min, k_max, **flags):
    """Tabulate total interval counts per homology dimension for each k."""
    if k_max < k_min:
        raise click.UsageError("--k-max must be >= --k-min")
    cfg = _build_config(**flags)
    rows = scan_k(read_layerstack(stack), range(k_min, k_max + 1), cfg)
    doc = [
        {"k": r["k"], **{f"dim{p}": c for p, c in sorted(r["counts"].items())}}
        for r in rows
    ]
    click.echo(_dump_json(doc), nl=False)


@cli.command()
@click.argument("kind", type=click.Choice(KINDS))
@click.option("--n", "n_points", type=int, required=True,
              help="Points per layer.")
@click.option("--layers", "n_layers", type=int, required=True,
              help="Number of layers.")
@click.option("--dim", type=int, default=2, show_default=True,
              help="Embedding dimension.")
@click.option("--noise", type=float, default=0.0, show_default=True,
              help="Gaussian jitter scale.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Generator seed.")
@click.option("--event-layer", type=int, default=None,
              help="Layer at which the vanish/merge event happens.")
@click.option("--out", required=True, type=click.Path(file_okay=False),
              help="Output layer-stack directory.")
@_guarded
def synth(kind, n_points, n_layers, dim, noise, seed, event_layer, out):
    """Write a synthetic layer stack with known topology."""
    try:
        spec = SynthSpec(
            kind=kind,
            n_points=n_points,
            n_layers=n_layers,
            dim=dim,
            noise_scale=noise,
            seed=seed,
            event_layer=event_layer,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    write_layerstack(generate(spec), out)
    click.echo(f"wrote {kind} stack to {out}")


@cli.command(name="oracle-check")
@click.argument("stack", type=click.Path(exists=True, file_okay=False))
@click.option("--cap", type=int, default=oracle.DEFAULT_SIMPLEX_CAP,
              show_default=True, help="Simplex-count limit per snapshot.")
@_pipeline_options
@_guarded
def oracle_check(stack, cap, **flags):
    """Recompute everything brute-force and verify the interval diagram."""
    cfg = _build_config(**flags)
    s = read_layerstack(stack)
    complexes = _layer_complexes(s, cfg)
    filt = build_filtration(complexes)
    diagram = compute_zigzag(filt, dims=list(cfg.homology_dims))
    states = snapshots(filt)
    try:
        report = oracle.verify_diagram(
            diagram, states, dims=list(cfg.homology_dims), cap=cap
        )
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(_dump_json(report.to_json_dict()), nl=False)
    if not report.passed:
        raise SystemExit(1)


main = cli

if __name__ == "__main__":
    main()
