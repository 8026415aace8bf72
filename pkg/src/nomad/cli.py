"""Experiment runner: dataset generation, solving, analysis, benchmarking.

Every command writes deterministic artifacts (CSV matrices, JSON reports,
SVG figures) into an output directory. Flags may also be provided through
a flat key-value TOML file via --config; explicit flags win on conflict.
The environment variable NOMAD_SEED supplies a global seed fallback.
Solver non-convergence is a result, not a failure: the command exits 0
with converged=false in the report. Unexpected errors emit a machine-
readable JSON object on stderr and exit 1; bad usage exits 2.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import click
import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import datasets as ds
from . import figures, serialize
from .bm import BmConfig, solve_nomad_bm
from .cgm import CgmConfig, SdpProblem, solve_nomad_cgm
from .linalg import gramian
from .manifold import (
    geodesic_ranking,
    bullseye_score,
    manifold_components,
    multilayer_nomad,
    similarity_to_distance,
    spectral_embedding,
)
from .rings import (
    active_mode_count,
    cone_geometry_check,
    cp_diagnostics,
    fourier_profile,
    lp_feasibility_check,
    neighborhood_width,
)

_GENERATORS = {
    "ring": ds.ring,
    "two_rings": ds.two_rings,
    "moons": ds.moons,
    "double_swiss_roll": ds.double_swiss_roll,
    "trefoil_knot": ds.trefoil_knot,
    "grid2d_in_10d": ds.grid2d_in_10d,
    "gaussian_blobs": ds.gaussian_blobs,
}


@dataclass
class ExperimentConfig:
    """Assembled run description: data source, solver, analysis, outputs."""

    dataset: str = ""
    data_path: str = ""
    solver: str = "cgm"
    K: float = 2.0
    K_schedule: list[float] = field(default_factory=list)
    analyses: list[str] = field(default_factory=list)
    out_dir: str = "."
    seed: int = 0
    solver_overrides: dict = field(default_factory=dict)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        raise click.UsageError(f"config file not found: {path}")
    with p.open("rb") as fh:
        return tomllib.load(fh)


def _merged(ctx: click.Context, config: dict, **flags):
    """Apply precedence: explicit flag > config-file key > flag default."""
    merged = {}
    for name, value in flags.items():
        src = ctx.get_parameter_source(name)
        explicit = src is not None and src.name in ("COMMANDLINE", "ENVIRONMENT")
        if not explicit and name in config:
            merged[name] = config[name]
        else:
            merged[name] = value
    return merged


def _outdir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _fail(err: Exception) -> None:
    payload = {"error": str(err), "type": type(err).__name__}
    click.echo(json.dumps(payload), err=True)
    sys.exit(1)


@click.group()
def main():
    """Manifold-disentangling SDP toolkit."""


@main.command()
@click.option("--dataset", required=True, type=click.Choice(sorted(_GENERATORS)))
@click.option("--n", type=int, default=100, help="points (per manifold where applicable)")
@click.option("--radius", type=float, default=1.0)
@click.option("--r1", type=float, default=1.0)
@click.option("--r2", type=float, default=3.0)
@click.option("--noise-std", type=float, default=0.05)
@click.option("--offset", type=float, default=0.3, help="moons vertical offset")
@click.option("--gap", type=float, default=float(np.pi), help="swiss roll radial gap")
@click.option("--height", type=float, default=1.0, help="swiss roll height")
@click.option("--side", type=int, default=10, help="grid side length")
@click.option("--centers", default="0:0;10:0", help="blob centers, e.g. 0:0;10:0")
@click.option("--std", type=float, default=1.0, help="blob standard deviation")
@click.option("--noise-dims", type=int, default=0,
              help="append this multiple of d extra noise dimensions")
@click.option("--seed", type=int, default=0, envvar="NOMAD_SEED")
@click.option("--out", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.pass_context
def generate(ctx, config_path, **flags):
    """Write a synthetic dataset to CSV (with labels)."""
    cfg = _merged(ctx, _load_config(config_path), **flags)
    try:
        name = cfg["dataset"]
        seed = int(cfg["seed"])
        if name == "ring":
            data = ds.ring(cfg["n"], cfg["radius"], seed)
        elif name == "two_rings":
            data = ds.two_rings(cfg["n"], cfg["r1"], cfg["r2"], seed)
        elif name == "moons":
            data = ds.moons(cfg["n"], cfg["noise_std"], cfg["offset"], seed)
        elif name == "double_swiss_roll":
            data = ds.double_swiss_roll(cfg["n"], cfg["gap"], cfg["height"], seed)
        elif name == "trefoil_knot":
            data = ds.trefoil_knot(cfg["n"], seed)
        elif name == "grid2d_in_10d":
            data = ds.grid2d_in_10d(cfg["side"], cfg["noise_std"], seed)
        else:
            centers = [[float(x) for x in c.split(":")] for c in cfg["centers"].split(";")]
            data = ds.gaussian_blobs(cfg["n"], centers, cfg["std"], seed)
        if cfg["noise_dims"]:
            data = ds.add_noise_dims(data, cfg["noise_dims"], cfg["noise_std"], seed)
        ds.save_csv(data, cfg["out"])
    except ValueError as err:
        raise click.UsageError(str(err))
    except Exception as err:  # pragma: no cover - defensive
        _fail(err)


def _cgm_config(cfg: dict) -> CgmConfig:
    return CgmConfig(
        gamma=cfg["gamma"], tau=cfg["tau"], n_inner=cfg["n_inner"],
        max_outer=cfg["max_outer"], tol_neg=cfg["tol_neg"],
        tol_obj=cfg["tol_obj"], eig_seed=cfg["seed"],
    )


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--has-labels", is_flag=True, default=False)
@click.option("--solver", type=click.Choice(["cgm", "bm"]), default="cgm")
@click.option("--k", type=float, required=True)
@click.option("--gamma", type=float, default=1.0)
@click.option("--tau", type=float, default=1.0)
@click.option("--n-inner", type=int, default=10)
@click.option("--max-outer", type=int, default=500)
@click.option("--tol-neg", type=float, default=1e-4)
@click.option("--tol-obj", type=float, default=1e-6)
@click.option("--r", type=int, default=0, help="bm factor rank (default: K)")
@click.option("--seed", type=int, default=0, envvar="NOMAD_SEED")
@click.option("--out-dir", default=".", type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.pass_context
def solve(ctx, config_path, **flags):
    """Solve the SDP on a CSV dataset and write Q, a report and a heatmap."""
    cfg = _merged(ctx, _load_config(config_path), **flags)
    try:
        data = ds.load_csv(cfg["data_path"], cfg["has_labels"])
        problem = SdpProblem(gramian(data.points), cfg["k"])
    except (ValueError, OSError) as err:
        raise click.UsageError(str(err))
    try:
        out = _outdir(cfg["out_dir"])
        if cfg["solver"] == "cgm":
            report = solve_nomad_cgm(problem, _cgm_config(cfg))
            q = report.Q
            serialize.save_json(report.to_dict(), out / "report.json")
        else:
            r = int(cfg["r"]) or max(1, int(round(cfg["k"])))
            bm_cfg = BmConfig(r=r, max_outer=cfg["max_outer"], seed=cfg["seed"])
            y, q_arr, bm_report = solve_nomad_bm(problem, bm_cfg)
            serialize.save_matrix_csv(y, out / "Y.csv")
            serialize.save_json(bm_report.to_dict(), out / "report.json")
            q = q_arr
        serialize.save_solution_matrix(q, cfg["k"], out / "Q.csv")
        figures.heatmap_svg(np.asarray(q), out / "Q_heatmap.svg",
                            title=f"Q ({cfg['solver']}, K={cfg['k']:g})")
    except Exception as err:  # pragma: no cover - defensive
        _fail(err)


@main.command()
@click.option("--q", "q_path", required=True, type=click.Path())
@click.option("--analyses", default="fourier,lp,cone,width,cp",
              help="comma list: fourier,lp,cone,width,cp")
@click.option("--tol", type=float, default=1e-3)
@click.option("--threshold-fraction", type=float, default=0.1)
@click.option("--out-dir", default=".", type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.pass_context
def analyze(ctx, config_path, **flags):
    """Run circulant/Fourier diagnostics on a stored solution matrix."""
    cfg = _merged(ctx, _load_config(config_path), **flags)
    try:
        q, k = serialize.load_solution_matrix(cfg["q_path"])
        wanted = [a.strip() for a in cfg["analyses"].split(",") if a.strip()]
        unknown = set(wanted) - {"fourier", "lp", "cone", "width", "cp"}
        if unknown:
            raise ValueError(f"unknown analyses: {sorted(unknown)}")
    except (ValueError, OSError) as err:
        raise click.UsageError(str(err))
    try:
        out = _outdir(cfg["out_dir"])
        result: dict = {"K": k, "n": q.n}
        profile = fourier_profile(q)
        if "fourier" in wanted:
            result["fourier"] = profile.to_dict()
            result["fourier"]["active_modes"] = active_mode_count(profile)
            serialize.save_matrix_csv(profile.diag_values, out / "diag_values.csv")
        if "lp" in wanted:
            result["lp"] = lp_feasibility_check(profile, k, cfg["tol"])
        if "cone" in wanted:
            result["cone"] = cone_geometry_check(q, cfg["tol"])
        if "width" in wanted:
            result["width"] = neighborhood_width(q, cfg["threshold_fraction"])
        if "cp" in wanted:
            result["cp"] = cp_diagnostics(q, k)
        serialize.save_json(result, out / "analysis.json")
    except Exception as err:  # pragma: no cover - defensive
        _fail(err)


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--has-labels", is_flag=True, default=False)
@click.option("--schedule", required=True, help="non-increasing, e.g. 16,8,4,2")
@click.option("--max-outer", default="500",
              help="outer budget, one value or one per layer")
@click.option("--edge-threshold", type=float, default=1e-3)
@click.option("--seed", type=int, default=0, envvar="NOMAD_SEED")
@click.option("--out-dir", default=".", type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.pass_context
def multilayer(ctx, config_path, **flags):
    """Recursive solving with decreasing K; writes every layer's kernel."""
    cfg = _merged(ctx, _load_config(config_path), **flags)
    try:
        data = ds.load_csv(cfg["data_path"], cfg["has_labels"])
        schedule = [float(x) for x in str(cfg["schedule"]).split(",")]
        if any(b > a for a, b in zip(schedule, schedule[1:])):
            raise ValueError(f"schedule must be non-increasing, got {schedule}")
        budgets = [int(x) for x in str(cfg["max_outer"]).split(",")]
        if len(budgets) == 1:
            budgets *= len(schedule)
        if len(budgets) != len(schedule):
            raise ValueError("max-outer must give one value or one per layer")
        layer_cfgs = [
            CgmConfig(max_outer=b, eig_seed=int(cfg["seed"])) for b in budgets
        ]
    except (ValueError, OSError) as err:
        raise click.UsageError(str(err))
    try:
        out = _outdir(cfg["out_dir"])
        reports = multilayer_nomad(data, schedule, layer_configs=layer_cfgs)
        summary = {"schedule": schedule, "layers": []}
        for i, rep in enumerate(reports):
            serialize.save_solution_matrix(rep.Q, schedule[i], out / f"layer{i}_Q.csv")
            figures.heatmap_svg(np.asarray(rep.Q), out / f"layer{i}_Q.svg",
                                title=f"layer {i} (K={schedule[i]:g})")
            labels = manifold_components(rep.Q, cfg["edge_threshold"])
            summary["layers"].append({
                "K": schedule[i],
                "converged": rep.converged,
                "objective": rep.objective,
                "n_components": int(labels.max()) + 1,
            })
        final = reports[-1].Q
        labels = manifold_components(final, cfg["edge_threshold"])
        emb = spectral_embedding(final, m=2)
        figures.scatter_svg(emb.coords, out / "final_embedding.svg",
                            labels=labels, title="final-layer embedding")
        serialize.save_matrix_csv(labels, out / "final_components.csv")
        serialize.save_json(summary, out / "multilayer_report.json")
    except Exception as err:  # pragma: no cover - defensive
        _fail(err)


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--has-labels", is_flag=True, default=False)
@click.option("--n-neighbors", type=int, default=10)
@click.option("--noise-std", type=float, default=0.05)
@click.option("--percentiles", default="10,25,50")
@click.option("--max-outer", type=int, default=500)
@click.option("--seed", type=int, default=0, envvar="NOMAD_SEED")
@click.option("--out-dir", default=".", type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.pass_context
def bullseye(ctx, config_path, **flags):
    """Geodesic-preservation protocol under injected noise dimensions.

    Ground truth: geodesics on the clean data's neighbor graph. The noisy
    copy is evaluated twice: direct distances (NO-EMB) and the learned
    kernel's graph with K = n / n_neighbors.
    """
    cfg = _merged(ctx, _load_config(config_path), **flags)
    try:
        data = ds.load_csv(cfg["data_path"], cfg["has_labels"])
        percentiles = [float(p) for p in str(cfg["percentiles"]).split(",")]
        n_nb = int(cfg["n_neighbors"])
        if not (1 <= n_nb < data.n):
            raise ValueError(f"n-neighbors must lie in [1, {data.n - 1}]")
    except (ValueError, OSError) as err:
        raise click.UsageError(str(err))
    try:
        out = _outdir(cfg["out_dir"])
        seed = int(cfg["seed"])
        ground = geodesic_ranking(data.points, n_nb)
        noisy = ds.add_noise_dims(data, 5, cfg["noise_std"], seed)
        direct = geodesic_ranking(noisy.points, n_nb)
        k = data.n / n_nb
        report = solve_nomad_cgm(
            SdpProblem(gramian(noisy.points), k),
            CgmConfig(max_outer=int(cfg["max_outer"]), eig_seed=seed),
        )
        q = np.asarray(report.Q)
        mask = q > 1e-6 * q.max()
        dist = np.asarray(similarity_to_distance(q))
        learned = geodesic_ranking(dist, n_nb, metric="precomputed", edge_mask=mask)
        scores = {
            "no_emb": bullseye_score(ground, direct, percentiles).to_dict(),
            "nomad": bullseye_score(ground, learned, percentiles).to_dict(),
        }
        scores["n_neighbors"] = n_nb
        scores["K"] = k
        scores["noise_std"] = cfg["noise_std"]
        scores["solver_converged"] = report.converged
        serialize.save_json(scores, out / "bullseye.json")
        serialize.save_ranking_csv(learned, out / "nomad_ranking.csv")
    except Exception as err:  # pragma: no cover - defensive
        _fail(err)


@main.command()
@click.option("--solver", type=click.Choice(["cgm", "bm"]), default="cgm")
@click.option("--sizes", default="250,500,1000,2000")
@click.option("--k", type=float, default=16.0)
@click.option("--outer", type=int, default=5, help="timed outer iterations")
@click.option("--seed", type=int, default=0, envvar="NOMAD_SEED")
@click.option("--out", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.pass_context
def bench(ctx, config_path, **flags):
    """Time per outer iteration across problem sizes; reports the log-log slope."""
    cfg = _merged(ctx, _load_config(config_path), **flags)
    try:
        sizes = [int(s) for s in str(cfg["sizes"]).split(",")]
        if any(s < 3 for s in sizes):
            raise ValueError("sizes must be >= 3")
    except ValueError as err:
        raise click.UsageError(str(err))
    try:
        rows = []
        for n in sizes:
            data = ds.ring(n)
            problem = SdpProblem(gramian(data.points), min(cfg["k"], n))
            if cfg["solver"] == "cgm":
                t0 = time.perf_counter()
                report = solve_nomad_cgm(
                    problem,
                    CgmConfig(max_outer=int(cfg["outer"]), eig_seed=int(cfg["seed"]),
                              tol_neg=1e-12, tol_obj=1e-15),
                )
                per_iter = (time.perf_counter() - t0) / report.outer_iters
            else:
                bm_cfg = BmConfig(r=max(1, int(cfg["k"])), max_outer=int(cfg["outer"]),
                                  seed=int(cfg["seed"]), feas_tol=1e-15)
                t0 = time.perf_counter()
                _, _, rep = solve_nomad_bm(problem, bm_cfg)
                per_iter = (time.perf_counter() - t0) / rep.outer_iters
            rows.append({"n": n, "seconds_per_iter": per_iter})
        serialize.save_table_csv(rows, ["n", "seconds_per_iter"], cfg["out"])
        big = [r for r in rows if r["n"] >= 500]
        if len(big) >= 2:
            logn = np.log([r["n"] for r in big])
            logt = np.log([r["seconds_per_iter"] for r in big])
            slope = float(np.polyfit(logn, logt, 1)[0])
            click.echo(f"log-log slope (n >= 500): {slope:.3f}")
    except Exception as err:  # pragma: no cover - defensive
        _fail(err)


if __name__ == "__main__":
    main()
