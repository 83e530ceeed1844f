"""Command-line front end.

Subcommands: roots, lemniscate, fingerprint, counterexample, properness.
Exit codes: 0 success, 2 precondition/usage violation, 3 numerical failure;
failures also emit a machine-readable JSON object on stderr. Output is
deterministic for a fixed configuration.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import io as lio
from .counterexample import (
    PolarGrid,
    build_boundary,
    chain_from_table,
    d4_table,
    f4_polynomial,
    noninjectivity_degree,
    reproduce_table,
)
from .curves import SampledCurve, unit_circle
from .errors import NumericalError, PreconditionError
from .fingerprint import (
    RectGrid,
    circle_map_of_blaschke,
    identity_report,
    is_proper,
    is_proper_oracle,
)
from .levelcurves import _component_through
from .polynomials import (
    as_rational,
    critical_values,
    design_counterexample,
    normalize_leading,
    poly_roots,
)

ENV_OUTDIR = "LEMNISCATES_OUTDIR"


@dataclass
class RunConfig:
    """Knobs shared by all commands; overridable via --config JSON."""

    nodes: int = 1024
    samples: int = 512
    samples_per_lap: int = 1024
    trace_step: float = 0.01
    close_tol_factor: float = 1e-6
    table_tol: float = 1e-3
    modulus_rtol: float = 1e-6
    grid_args: int = 360
    grid_moduli: int = 100
    grid_mod_min: float = 0.16
    grid_mod_max: float = 7.9
    oracle_nx: int = 96
    oracle_ny: int = 96
    outdir: str = "."
    seed: int = 1234
    svg_width: int = 800

    def validate(self):
        for name in ("trace_step", "close_tol_factor", "table_tol", "modulus_rtol"):
            if getattr(self, name) <= 0:
                raise PreconditionError(f"{name} must be positive")
        if self.nodes < 64 or self.nodes > 4096 or self.nodes & (self.nodes - 1):
            raise PreconditionError("nodes must be a power of two in [64, 4096]")
        for name in ("samples", "samples_per_lap", "grid_args", "grid_moduli",
                     "oracle_nx", "oracle_ny", "svg_width"):
            if getattr(self, name) <= 0:
                raise PreconditionError(f"{name} must be positive")
        return self

    @classmethod
    def load(cls, path=None, overrides=None):
        cfg = cls()
        if path:
            with open(path) as fh:
                data = json.load(fh)
            known = {f.name for f in fields(cls)}
            unknown = set(data) - known
            if unknown:
                raise PreconditionError(f"unknown config keys: {sorted(unknown)}")
            for k, v in data.items():
                setattr(cfg, k, type(getattr(cfg, k))(v))
        for k, v in (overrides or {}).items():
            if v is not None:
                setattr(cfg, k, v)
        env_out = os.environ.get(ENV_OUTDIR)
        if env_out:
            cfg.outdir = env_out
        return cfg.validate()


def _load_curve_arg(arg: str) -> SampledCurve:
    if arg == "unit-circle":
        return unit_circle(512)
    return lio.load_curve(arg)


def _emit(payload: dict):
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _outpath(cfg: RunConfig, name: str) -> Path:
    out = Path(cfg.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out / name


def cmd_roots(args, cfg: RunConfig) -> dict:
    p = lio.load_polynomial(args.poly)
    if p.degree < 1:
        raise PreconditionError("polynomial must have degree >= 1")
    roots = poly_roots(p, tol=args.tol)
    return {
        "degree": p.degree,
        "roots": [
            {"point": [z.real, z.imag], "multiplicity": m} for z, m in roots
        ],
    }


def _level_family(f, moduli, step):
    """Deduplicated closed components of |f|=eps through each zero, per eps."""
    zero_pts = sorted({complex(r) for r, _ in f.zeros()}, key=lambda z: (z.real, z.imag))
    out = []
    for eps in moduli:
        seen = set()
        for z0 in zero_pts:
            try:
                loop, signature = _component_through(f, eps, z0, step, zero_pts)
            except NumericalError:
                continue
            if signature not in seen:
                seen.add(signature)
                out.append((eps, loop))
    return out


def cmd_lemniscate(args, cfg: RunConfig) -> dict:
    from .fingerprint import pseudo_lemniscate

    p = lio.load_polynomial(args.poly)
    p, rot = normalize_leading(p)
    gamma = _load_curve_arg(args.curve)
    svg_path = _outpath(cfg, Path(args.out).name)
    json_path = svg_path.with_suffix(".json")
    payload = {"leading_rotation": [rot.real, rot.imag]}
    if p.degree >= 1 and is_proper(p, gamma):
        curve = pseudo_lemniscate(p, gamma, cfg.samples_per_lap)
        lio.save_curve(curve, json_path)
        lio.curves_to_svg(
            [curve, gamma], svg_path, width=cfg.svg_width, title="pseudo-lemniscate"
        )
        payload.update(
            {"proper": True, "svg": str(svg_path), "curve_json": str(json_path),
             "points": len(curve)}
        )
    else:
        f = as_rational(p)
        cvs = critical_values(p) if p.degree >= 2 else []
        moduli = sorted({abs(cv) * s for cv in cvs if abs(cv) > 0 for s in (0.98, 1.02)})
        family = _level_family(f, moduli, cfg.trace_step)
        curves = [loop for _, loop in family]
        if curves:
            lio.curves_to_svg(
                curves, svg_path, width=cfg.svg_width, title="critical level sets"
            )
            lio.save_curve(curves[0], json_path)
        payload.update(
            {
                "proper": False,
                "warning": "input is not proper; rendered level sets near the "
                "critical moduli instead",
                "svg": str(svg_path) if curves else None,
                "levels": [eps for eps, _ in family],
            }
        )
    return payload


def cmd_fingerprint(args, cfg: RunConfig) -> dict:
    p = lio.load_polynomial(args.poly)
    p, rot = normalize_leading(p)
    gamma = _load_curve_arg(args.curve)
    rep = identity_report(
        p, gamma, samples=cfg.samples, nodes=cfg.nodes,
        samples_per_lap=cfg.samples_per_lap,
    )
    out = _outpath(cfg, Path(args.out).name)
    lio.save_circle_map_csv(rep.k_p, out)
    kg_path = out.with_name(out.stem + "_kgamma.csv")
    lio.save_circle_map_csv(rep.k_gamma, kg_path)
    blift = circle_map_of_blaschke(rep.blaschke, samples=2048)
    b_path = out.with_name(out.stem + "_blaschke.csv")
    lio.save_circle_map_csv(blift, b_path)
    bj_path = out.with_name(out.stem + "_blaschke.json")
    bj_path.write_text(json.dumps(lio.blaschke_to_dict(rep.blaschke)) + "\n")
    payload = {
        "degree": rep.degree,
        "residual_rad": rep.residual,
        "leading_rotation": [rot.real, rot.imag],
        "k_p_csv": str(out),
        "k_gamma_csv": str(kg_path),
        "blaschke_csv": str(b_path),
        "blaschke_json": str(bj_path),
    }
    if args.save_maps:
        saved = {}
        for name, m in rep.maps.items():
            mp = out.with_name(f"{out.stem}_map_{name}.json")
            mp.write_text(json.dumps(lio.solved_map_to_dict(m)) + "\n")
            saved[name] = str(mp)
        payload["solved_maps"] = saved
    return payload


def _require_degree4(args):
    if args.n != 4:
        raise PreconditionError(
            "the bounded region construction is built in for degree 4 only; "
            "use the 'family' subcommand for higher-degree polynomials"
        )


def _build_chain(cfg: RunConfig):
    return build_boundary(
        f4_polynomial(),
        chain_from_table(d4_table()),
        step=cfg.trace_step,
        close_tol_factor=cfg.close_tol_factor,
    )


def cmd_counterexample(args, cfg: RunConfig) -> dict:
    if args.action == "family":
        design = design_counterexample(args.n, step=cfg.trace_step)
        path = _outpath(cfg, f"f{args.n}.json")
        lio.save_polynomial(design.poly, path)
        return {"polynomial_json": str(path), **design.metadata()}
    _require_degree4(args)
    f4 = f4_polynomial()
    chain = _build_chain(cfg)
    if args.action == "table":
        report = reproduce_table(
            f4, chain, table_tol=cfg.table_tol, modulus_rtol=cfg.modulus_rtol
        )
        path = _outpath(cfg, "table_report.json")
        path.write_text(json.dumps(report.to_dict(), sort_keys=True) + "\n")
        return {
            "all_ok": report.all_ok,
            "rows_ok": sum(r.ok for r in report.rows),
            "rows": len(report.rows),
            "report_json": str(path),
        }
    if args.action == "noninj":
        grid = PolarGrid(cfg.grid_args, cfg.grid_moduli, cfg.grid_mod_min, cfg.grid_mod_max)
        res = noninjectivity_degree(f4, chain, grid)
        path = _outpath(cfg, "noninjectivity.json")
        path.write_text(
            json.dumps(
                {
                    "degree": res.degree,
                    "grid": [cfg.grid_args, cfg.grid_moduli],
                    "moduli_range": [cfg.grid_mod_min, cfg.grid_mod_max],
                    "evaluated": res.n_evaluated,
                    "skipped": res.n_skipped,
                    "witnesses": [[w.real, w.imag] for w in res.witnesses],
                    "skipped_points": [[w.real, w.imag] for w in res.skipped],
                },
                sort_keys=True,
            )
            + "\n"
        )
        return {"degree": res.degree, "evaluated": res.n_evaluated,
                "skipped": res.n_skipped, "report_json": str(path)}
    # export
    curve_path = _outpath(cfg, "d4_boundary.json")
    lio.save_curve(chain.curve, curve_path)
    svg_path = _outpath(cfg, "d4_boundary.svg")
    moduli = sorted({s.value for s in chain.specs if s.kind == "level"})
    family = _level_family(as_rational(f4), moduli, cfg.trace_step)
    curves = [chain.curve] + [loop for _, loop in family]
    widths = [2.5] + [0.8] * len(family)
    labels = ["boundary"] + [f"level {eps:g}" for eps, _ in family]
    lio.curves_to_svg(curves, svg_path, width=cfg.svg_width,
                      labels=labels, stroke_widths=widths, title="region boundary")
    return {
        "curve_json": str(curve_path),
        "svg": str(svg_path),
        "vertices": len(chain.vertices),
        "closure_residual": chain.closure_residual,
        "level_components": len(family),
    }


def cmd_properness(args, cfg: RunConfig) -> dict:
    p = lio.load_polynomial(args.poly)
    p, rot = normalize_leading(p)
    gamma = _load_curve_arg(args.curve)
    direct = is_proper(p, gamma)
    oracle = is_proper_oracle(p, gamma, RectGrid(cfg.oracle_nx, cfg.oracle_ny))
    return {
        "proper": direct,
        "criterion_critical_values": direct,
        "oracle_connectivity": oracle,
        "methods_agree": direct == oracle,
        "leading_rotation": [rot.real, rot.imag],
    }


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lemniscates",
        description="Polynomial lemniscates, welding fingerprints, and the "
        "degree-4 non-injectivity region.",
    )
    ap.add_argument("--config", help="JSON file with RunConfig overrides")
    ap.add_argument("--outdir", help="output directory (default: config or cwd)")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("roots", help="all roots of a polynomial, with multiplicity")
    sp.add_argument("poly", help="polynomial JSON file")
    sp.add_argument("--tol", type=float, default=1e-8)

    sp = sub.add_parser("lemniscate", help="trace p^{-1}(curve) and render it")
    sp.add_argument("poly")
    sp.add_argument("curve", help='curve JSON file or "unit-circle"')
    sp.add_argument("out", help="output SVG filename")

    sp = sub.add_parser("fingerprint", help="fingerprints, Blaschke model, residual")
    sp.add_argument("poly")
    sp.add_argument("curve", help='curve JSON file or "unit-circle"')
    sp.add_argument("out", help="output CSV filename for the fingerprint lift")
    sp.add_argument(
        "--save-maps", action="store_true",
        help="also write the four solved Riemann maps as reusable JSON",
    )

    sp = sub.add_parser("counterexample", help="degree-4 region commands")
    sp.add_argument("action", choices=["table", "noninj", "export", "family"])
    sp.add_argument("--n", type=int, default=4, help="family degree (family action)")

    sp = sub.add_parser("properness", help="properness by both methods")
    sp.add_argument("poly")
    sp.add_argument("curve", help='curve JSON file or "unit-circle"')
    return ap


_HANDLERS = {
    "roots": cmd_roots,
    "lemniscate": cmd_lemniscate,
    "fingerprint": cmd_fingerprint,
    "counterexample": cmd_counterexample,
    "properness": cmd_properness,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = RunConfig.load(args.config, {"outdir": args.outdir})
        payload = _HANDLERS[args.command](args, cfg)
    except PreconditionError as err:
        sys.stderr.write(
            json.dumps({"error": type(err).__name__, "message": str(err)}) + "\n"
        )
        return 2
    except NumericalError as err:
        sys.stderr.write(
            json.dumps({"error": type(err).__name__, "message": str(err)}) + "\n"
        )
        return 3
    _emit(payload)
    return 0


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
