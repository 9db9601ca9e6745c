"""Command-line front end: ``perslap <subcommand> ...``.

Exit codes: 0 success, 1 domain error or failed validation, 2 usage, input
or parse error.  Reports are rendered completely before anything is written.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import datasets
from .boundary import CONSTRUCTIONS, Weight
from .complex import (
    DEFAULT_SIMPLEX_BUDGET,
    build_distance_matrix,
    filtration,
    rips_complex,
    uniform_schedule,
    validate_distance_matrix,
)
from .errors import DomainError, InputError
from .io import (
    Report,
    RunConfig,
    parse_distance_csv,
    parse_energies,
    parse_schedule,
    read_structure,
)
from .pipelines import (
    BFACTOR_SCHEDULE,
    CURVE_STATISTICS,
    FULLERENE_DR,
    bfactor_features,
    bfactor_fit,
    fullerene_pipeline,
    spectral_curve,
)
from .spectral import DEFAULT_TAU, STATISTICS, persistent_spectrum
from .validation import CrossCheck, cross_check, event_filtration, random_cross_check

STRUCTURE_SUFFIXES = (".xyz", ".pdb", ".ent", ".csv", ".txt", ".dat")


def _schedule_triple(sched: np.ndarray) -> tuple[float, float, float]:
    step = float(sched[1] - sched[0]) if sched.size > 1 else 0.0
    return (float(sched[0]), float(sched[-1]), step) if step > 0 else (float(sched[0]), float(sched[0]), 1.0)


def _distances(args: argparse.Namespace) -> np.ndarray:
    if getattr(args, "distances", False):
        try:
            text = Path(args.input).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
        return validate_distance_matrix(parse_distance_csv(text))
    return build_distance_matrix(read_structure(args.input))


def _default_schedule(d: np.ndarray, dr: float = 0.01) -> np.ndarray:
    return uniform_schedule(0.0, float(d.max()) / 2.0 + dr, dr)


def _config(args: argparse.Namespace, **kw) -> RunConfig:
    return RunConfig(
        command=args.command,
        output_format=args.format,
        output=args.output,
        strict_overlap=getattr(args, "strict_overlap", False),
        tau=getattr(args, "tau", DEFAULT_TAU),
        weight=getattr(args, "weight", "none"),
        **kw,
    )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_rips(args: argparse.Namespace) -> Report:
    d = _distances(args)
    K = rips_complex(d, args.r, args.qmax, strict_overlap=args.strict_overlap, budget=args.budget)
    records = [{"r": args.r, "q": q, "count": K.count(q)} for q in range(args.qmax + 1)]
    cfg = _config(args, inputs=(args.input,), q_max=args.qmax)
    return Report(cfg, records, {"n_points": d.shape[0], "euler_characteristic": K.euler_characteristic()})


def _spectrum_record(r: float, p: float, q: int, spectrum) -> dict:
    rec: dict = {"r": r, "p": p, "q": q}
    if spectrum is None:
        rec.update(dim=0, betti=0, lambda2_tilde=None)
        rec.update({k: None for k in STATISTICS if k != "sec"})
        rec["eigenvalues"] = []
        return rec
    stats = spectrum.stats()
    rec.update(dim=len(spectrum), betti=spectrum.betti, lambda2_tilde=spectrum.lambda2_tilde)
    rec.update({k: stats[k] for k in STATISTICS if k != "sec"})
    rec["eigenvalues"] = spectrum.eigenvalues.tolist()
    return rec


def cmd_spectra(args: argparse.Namespace) -> Report:
    d = _distances(args)
    sched = parse_schedule(args.schedule) if args.schedule else _default_schedule(d)
    p = args.p
    if p < 0:
        raise InputError("--p must be non-negative")
    if args.t is not None:
        starts = [args.t]
        grid = np.unique(np.concatenate([sched, [args.t, args.t + p]]))
    else:
        starts = [r for r in sched if r + p <= sched[-1] * (1 + 1e-12)]
        grid = np.unique(np.concatenate([sched, np.asarray(starts) + p])) if p > 0 else sched
    f = filtration(d, grid, q_max_build=args.q + 1, strict_overlap=args.strict_overlap, budget=args.budget)
    if args.t is not None and not (sched[0] - 1e-12 <= args.t and args.t + p <= sched[-1] + 1e-12):
        raise InputError("t and t+p must lie within the schedule")
    records = []
    for t in starts:
        spectrum = persistent_spectrum(
            f, t, p, args.q, args.weight, tau=args.tau, construction=args.construction
        )
        records.append(_spectrum_record(float(t), p, args.q, spectrum))
    cfg = _config(
        args, inputs=(args.input,), schedule=_schedule_triple(sched), q_max=args.q,
        extra={"p": p, "t": args.t, "construction": args.construction},
    )
    return Report(cfg, records, {"n_points": d.shape[0]})


def cmd_curve(args: argparse.Namespace) -> Report:
    d = _distances(args)
    sched = parse_schedule(args.schedule) if args.schedule else _default_schedule(d)
    c = spectral_curve(d, sched, args.q, args.alpha, args.weight, tau=args.tau, strict_overlap=args.strict_overlap)
    records = [{"r": r, "value": v} for r, v in zip(c.radii, c.values)]
    cfg = _config(args, inputs=(args.input,), schedule=_schedule_triple(sched), q_max=args.q, alphas=(args.alpha,))
    return Report(cfg, records, {"alpha": args.alpha, "q": args.q})


def _structure_files(folder: Path) -> list[Path]:
    if not folder.is_dir():
        raise InputError(f"{folder} is not a directory")
    files = sorted(p for p in folder.iterdir() if p.suffix.lower() in STRUCTURE_SUFFIXES and p.is_file())
    if not files:
        raise InputError(f"no structure files in {folder}")
    return files


def cmd_fullerene(args: argparse.Namespace) -> Report:
    try:
        energies = parse_energies(Path(args.energies).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {args.energies}: {exc.strerror}") from None
    files = [p for p in _structure_files(Path(args.dir)) if p.stem in energies]
    if len(files) < 3:
        raise InputError("fewer than 3 structures have energies")
    structures = [(p.stem, read_structure(p)) for p in files]
    alphas = STATISTICS if args.alpha == "all" else tuple(a.strip() for a in args.alpha.split(","))
    sched = parse_schedule(args.schedule) if args.schedule else None
    records, summary = [], {}
    for alpha in alphas:
        model = fullerene_pipeline(
            structures, energies, alpha, sched, q=args.q, mode=args.weight, dr=args.dr
        )
        for row in model.rows():
            records.append({"alpha": alpha, "n_atoms": len(dict(structures)[row["name"]]), **row})
        summary[alpha] = {"pearson": model.pearson, "slope": model.slope, "intercept": model.intercept}
    cfg = _config(
        args, inputs=tuple(str(p) for p in files), q_max=args.q, alphas=alphas,
        schedule=_schedule_triple(sched) if sched is not None else None, extra={"dr": args.dr},
    )
    return Report(cfg, records, summary)


def cmd_bfactor(args: argparse.Namespace) -> Report:
    cloud = read_structure(args.input)
    if cloud.bfactors is None:
        raise InputError("input carries no B-factors (use a PDB file)")
    sched = parse_schedule(args.schedule) if args.schedule else np.array(BFACTOR_SCHEDULE)
    feats = bfactor_features(cloud, sched, args.weight, tau=args.tau)
    model = bfactor_fit(feats, cloud.bfactors, sched)
    labels = cloud.labels or tuple(str(i) for i in range(len(cloud)))
    records = [
        {"index": i, "residue": lab, "experimental": b, "predicted": p}
        for i, (lab, b, p) in enumerate(zip(labels, cloud.bfactors, model.predictions))
    ]
    cfg = _config(args, inputs=(args.input,), schedule=_schedule_triple(sched))
    summary = {"n_residues": len(cloud), "pearson": model.pearson, "weights": model.weights.tolist()}
    return Report(cfg, records, summary)


def cmd_validate(args: argparse.Namespace) -> Report:
    check = CrossCheck()
    sources = []
    if args.fixture:
        f = datasets.five_point_filtration() if args.fixture == "five-point" else event_filtration(
            build_distance_matrix(datasets.benzene()), args.qmax
        )
        check.merge(cross_check(f, args.qmax))
        sources.append(f"fixture:{args.fixture}")
    if args.input:
        d = _distances(args)
        if args.schedule:
            f = filtration(d, parse_schedule(args.schedule), args.qmax + 1, strict_overlap=args.strict_overlap)
        else:
            f = event_filtration(d, args.qmax)
        check.merge(cross_check(f, args.qmax))
        sources.append(args.input)
    if args.random:
        check.merge(random_cross_check(args.random, args.seed, args.points, args.qmax))
        sources.append(f"random:{args.random}")
    if not sources:
        raise InputError("nothing to validate: give an input, --fixture or --random")
    records = [
        {"r": t, "r_end": s, "q": q, "laplacian_betti": a, "exact_betti": b}
        for t, s, q, a, b in check.mismatches
    ]
    cfg = _config(args, inputs=tuple(sources), q_max=args.qmax, extra={"seed": args.seed})
    report = Report(cfg, records, {"cells": check.cells, "mismatches": len(check.mismatches)})
    report.summary["ok"] = check.ok
    return report


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _alpha(value: str) -> str:
    v = value.lower()
    if v not in CURVE_STATISTICS:
        raise argparse.ArgumentTypeError(f"choose from {', '.join(CURVE_STATISTICS)}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perslap", description="Persistent spectral analysis of point clouds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, structure: bool = True) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", help="write the report here instead of stdout")
        p.add_argument("--strict-overlap", action="store_true", help="use d < 2r instead of d <= 2r")
        p.add_argument("--tau", type=float, default=DEFAULT_TAU, help="relative zero tolerance")
        if structure:
            p.add_argument("--distances", action="store_true", help="input is a CSV distance matrix")

    p = sub.add_parser("rips", help="simplex counts of the Rips complex at one radius")
    p.add_argument("input")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--qmax", type=int, default=3)
    p.add_argument("--budget", type=int, default=DEFAULT_SIMPLEX_BUDGET)
    common(p)

    p = sub.add_parser("spectra", help="persistent Laplacian spectra along a schedule")
    p.add_argument("input")
    p.add_argument("--schedule", help="start:stop:step (default 0 to half the diameter, step 0.01)")
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--weight", choices=("none", "vol", "inv"), default="none")
    p.add_argument("--t", type=float, help="single start radius")
    p.add_argument("--p", type=float, default=0.0, help="persistence offset")
    p.add_argument("--construction", choices=CONSTRUCTIONS, default="subspace")
    p.add_argument("--budget", type=int, default=DEFAULT_SIMPLEX_BUDGET)
    common(p)

    p = sub.add_parser("curve", help="one spectral statistic as a function of radius")
    p.add_argument("input")
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--schedule")
    p.add_argument("--weight", choices=("none", "vol", "inv"), default="none")
    common(p)

    p = sub.add_parser("fullerene", help="fit heats of formation to spectral-curve areas")
    p.add_argument("dir")
    p.add_argument("--energies", required=True, help="CSV with name,energy_ev_per_atom")
    p.add_argument("--alpha", default="max", help="statistic, comma list, or 'all'")
    p.add_argument("--schedule", help="shared schedule (default: per structure)")
    p.add_argument("--dr", type=float, default=FULLERENE_DR)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--weight", choices=("none", "vol", "inv"), default="none")
    common(p, structure=False)

    p = sub.add_parser("bfactor", help="predict B-factors from multiscale pseudoinverse features")
    p.add_argument("input")
    p.add_argument("--schedule", help="default 2:12:1")
    p.add_argument("--weight", choices=("none", "vol", "inv"), default="none")
    common(p, structure=False)

    p = sub.add_parser("validate", help="compare Laplacian nullities with exact persistent Betti numbers")
    p.add_argument("input", nargs="?")
    p.add_argument("--schedule", help="default: every critical radius")
    p.add_argument("--qmax", type=int, default=2)
    p.add_argument("--fixture", choices=("five-point", "benzene"))
    p.add_argument("--random", type=int, default=0, help="also check this many random clouds")
    p.add_argument("--points", type=int, default=8, help="max points per random cloud")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    return parser


COMMANDS = {
    "rips": cmd_rips,
    "spectra": cmd_spectra,
    "curve": cmd_curve,
    "fullerene": cmd_fullerene,
    "bfactor": cmd_bfactor,
    "validate": cmd_validate,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "weight", None) is not None:
        args.weight = Weight.parse(args.weight).value
    try:
        report = COMMANDS[args.command](args)
        text = report.render()
    except DomainError as exc:
        print(f"perslap {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"perslap {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "validate" and not report.summary["ok"]:
        print(f"perslap validate: {report.summary['mismatches']} mismatches", file=sys.stderr)
        return 1
    return 0


cli = main
