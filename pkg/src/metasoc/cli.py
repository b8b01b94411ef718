"""Command-line front end.

Subcommands: extract, fit, rules, correlate, simulate, report, replay.
Every command writes its outputs plus a ``manifest.json`` into ``--out``.

Exit codes: 0 ok, 2 input error, 3 empty result, 4 numeric/model error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .constructions import cluster, constructions_csv, dump_profile, load_profile, summarize
from .corpus import extract_instances, instances_to_jsonl, parse_corpus
from .errors import CorpusError, EmptyInput, FitError, ZeroVariance
from .fitting import (FITTERS, PointSet, fit_power_law, fit_to_dict, power_family,
                      sample_curve)
from .rules import (apply_rules_report, class_timeline, mine_rules, rules_from_json,
                    rules_report, rules_to_json)
from .soc import (AdoptionConfig, SandpileConfig, avalanche_distribution, histogram_csv,
                  records_csv, records_json, run_adoption, run_sandpile, size_exponent)
from .stats import batch_fit_summary, correlation_matrix, rank_frequency, read_table
from .svg import Chart, stack

EXIT_OK, EXIT_INPUT, EXIT_EMPTY, EXIT_MODEL = 0, 2, 3, 4

log = logging.getLogger("metasoc")


class InputError(Exception):
    pass


def _num(x, digits=12):
    """Round for serialisation so outputs do not depend on last-bit differences."""
    return float(f"{x:.{digits}g}")


def _write(out: Path, name: str, text: str, written: list) -> Path:
    path = out / name
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    written.append(str(path))
    return path


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- extract

def cmd_extract(args, out: Path, written: list) -> int:
    try:
        with open(args.corpus, encoding="utf-8") as fh:
            corpus = parse_corpus(fh, strict=args.strict)
    except (OSError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for sent_id, message in corpus.rejected:
        print(f"warning: skipped {message}", file=sys.stderr)

    profiles, dumped = [], []
    for lemma in args.lemma:
        instances = extract_instances(corpus, lemma)
        dumped += instances
        if not instances:
            print(f"warning: lemma {lemma!r} not found", file=sys.stderr)
            continue
        profile = cluster(instances, args.min_cluster_size, args.min_coverage,
                          iterate=not args.one_pass)
        summary = summarize(profile)
        if summary.warning:
            print(f"warning: {lemma}: {summary.warning}", file=sys.stderr)
        profiles.append(profile)
        _write(out, f"profiles/{lemma}.json", dump_profile(profile), written)

    _write(out, "constructions.csv", constructions_csv(profiles), written)
    if args.dump_instances:
        _write(out, "instances.jsonl", instances_to_jsonl(dumped), written)
    if not any(p.constructions for p in profiles):
        return EXIT_EMPTY
    return EXIT_OK


# ---------------------------------------------------------------- fit

def _read_points(path: Path) -> PointSet:
    with open(path, encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if rows and not {"x", "y"} <= set(rows[0]):
        raise InputError("points CSV needs columns x,y")
    return PointSet.from_pairs((float(r["x"]), float(r["y"])) for r in rows)


def _parse_family(spec: list[str]) -> tuple[float, list[float]]:
    kv = dict(item.split("=", 1) for item in spec)
    a = float(kv.get("a", 2))
    lo, hi, step = (float(v) for v in kv.get("b", "0.5:2.5:0.5").split(":"))
    count = int(round((hi - lo) / step)) + 1
    return a, [round(lo + i * step, 10) for i in range(count)]


def _fit_chart(points, fit, title) -> Chart:
    xs = np.linspace(min(points.xs), max(points.xs), 100)
    chart = Chart(title=title, xlabel="rank" if fit.model != "logistic" else "x",
                  ylabel="frequency" if fit.model != "logistic" else "y")
    chart.scatter(points.points, label="data")
    chart.line(sample_curve(fit, xs), label=fit.model)
    chart.note(f"R² = {fit.quality.r_squared:.4f}")
    chart.note(", ".join(f"{k} = {v:.4g}" for k, v in fit.params.items()))
    return chart


def cmd_fit(args, out: Path, written: list) -> int:
    if args.family:
        a, bs = _parse_family(args.family)
        xs = np.linspace(1, args.family_xmax, 200)
        curves = power_family(a, bs, xs)
        chart = Chart(title=f"y = {a:g} x^-b", xlabel="x", ylabel="y")
        rows = ["b,x,y"]
        for b, pts in curves.items():
            chart.line(pts, label=f"b = {b:g}")
            rows += [f"{b!r},{x!r},{y!r}" for x, y in pts]
        _write(out, "family.svg", chart.render(), written)
        _write(out, "family.csv", "\n".join(rows) + "\n", written)
        return EXIT_OK

    if args.batch:
        profiles = [load_profile(p) for p in sorted(Path(args.input).glob("*.json"))]
        summary = batch_fit_summary(profiles, args.method)
        report = {
            "fits": {k: _rounded(fit_to_dict(f)) for k, f in summary.fits.items()},
            "errors": summary.errors,
            "r_squared": {
                "mean": _maybe(summary.mean_r_squared),
                "min": _maybe(summary.min_r_squared),
                "max": _maybe(summary.max_r_squared),
            },
        }
        _write(out, "batch_fit.json", _json(report), written)
        return EXIT_OK if summary.fits else EXIT_MODEL

    path = Path(args.input)
    try:
        if path.suffix == ".json":
            profile = load_profile(path)
            points = rank_frequency(profile)
            title = profile.lemma
        else:
            points = _read_points(path)
            title = path.stem
    except (OSError, ValueError, KeyError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.model == "power":
            fit = fit_power_law(points, args.method)
        else:
            fit = FITTERS[args.model](points)
    except FitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MODEL
    _write(out, "fit.json", _json(_rounded(fit_to_dict(fit))), written)
    curve = sample_curve(fit, points.xs)
    _write(out, "curve.csv", "x,y\n" + "".join(f"{_num(x)!r},{_num(y)!r}\n" for x, y in curve),
           written)
    _write(out, "fit.svg", _fit_chart(points, fit, title).render(), written)
    return EXIT_OK


def _maybe(v):
    return None if v is None else _num(v)


def _rounded(d: dict) -> dict:
    d = dict(d)
    d["params"] = {k: _num(v) for k, v in d["params"].items()}
    d["r_squared"] = _num(d["r_squared"])
    d["sse"] = _num(d["sse"])
    return d


# ---------------------------------------------------------------- rules

def cmd_rules(args, out: Path, written: list) -> int:
    paths = sorted(Path(args.profiles).glob("*.json"))
    if not paths:
        print(f"error: no profile JSON in {args.profiles}", file=sys.stderr)
        return EXIT_INPUT
    timelines = []
    for p in paths:
        profile = load_profile(p)
        if profile.constructions:
            timelines.append(class_timeline(profile))
    if not timelines:
        print("error: no profile has constructions", file=sys.stderr)
        return EXIT_EMPTY
    rules = mine_rules(timelines, args.min_frequency, args.min_probability, args.denominator)
    if len(timelines) == 1:
        print("note: a single metaphor cannot support cross-metaphor rules", file=sys.stderr)
    _write(out, "rules.json", rules_to_json(rules), written)
    _write(out, "rules.txt", rules_report(rules), written)
    _write(out, "timelines.json",
           _json({t.lemma: dict(t.class_foys) for t in timelines}), written)
    return EXIT_OK


# ---------------------------------------------------------------- correlate

def cmd_correlate(args, out: Path, written: list) -> int:
    try:
        with open(args.table, encoding="utf-8") as fh:
            rows = read_table(fh)
        matrix = correlation_matrix(rows)
    except (OSError, ValueError, KeyError) as exc:
        if isinstance(exc, ZeroVariance):
            print(f"error: ZeroVariance in column {exc.variable!r}", file=sys.stderr)
            return EXIT_MODEL
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = matrix.to_csv()
    _write(out, "matrix.csv", text, written)
    sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- simulate

def _load_config(args) -> dict:
    cfg = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    for key in ("width", "height", "drops", "threshold", "seed", "n_nodes", "steps",
                "topology", "threshold_fraction", "innovation_rate"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def cmd_simulate(args, out: Path, written: list) -> int:
    cfg = _load_config(args)
    try:
        if args.kind == "sandpile":
            config = SandpileConfig(width=cfg.get("width", 50), height=cfg.get("height", 50),
                                    drops=cfg.get("drops", 10000), seed=cfg.get("seed", 0),
                                    threshold=cfg.get("threshold", 4))
            records = run_sandpile(config)
        else:
            config = AdoptionConfig(topology=cfg.get("topology", "small_world"),
                                    n_nodes=cfg.get("n_nodes", 200),
                                    threshold_fraction=cfg.get("threshold_fraction", 0.25),
                                    innovation_rate=cfg.get("innovation_rate", 0.01),
                                    steps=cfg.get("steps", 1000), seed=cfg.get("seed", 0),
                                    topology_params=cfg.get("topology_params", {}))
            trace = run_adoption(config)
            records = list(trace.avalanches)
            _write(out, "trace.csv", trace.to_csv(), written)
            curve = Chart(title="cumulative adoption", xlabel="step", ylabel="adopters")
            curve.line([(t, int(c)) for t, c in enumerate(trace.cumulative, 1)], label="adopters")
            _write(out, "adoption.svg", curve.render(), written)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    _write(out, "config.json", _json({k: v for k, v in vars(config).items()}), written)
    _write(out, "records.csv", records_csv(records), written)
    _write(out, "avalanches.json", records_json([r for r in records if r.size > 0]), written)
    try:
        hist = avalanche_distribution(records, "log2")
    except EmptyInput:
        print("note: no avalanches of non-zero size", file=sys.stderr)
        return EXIT_OK
    _write(out, "histogram.csv", histogram_csv(hist), written)
    chart = Chart(title=f"{args.kind} avalanche sizes", xlabel="size", ylabel="density",
                  logx=True, logy=True)
    chart.scatter(hist.points, label="log2 bins")
    try:
        slope, r2 = size_exponent(records)
        chart.note(f"slope = {slope:.3f}, R² = {r2:.3f} (body)")
    except (EmptyInput, ZeroVariance):
        pass
    _write(out, "distribution.svg", chart.render(), written)
    return EXIT_OK


# ---------------------------------------------------------------- report

def cmd_report(args, out: Path, written: list) -> int:
    try:
        profile = load_profile(args.profile)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    summary = summarize(profile)
    report = {
        "lemma": profile.lemma,
        "construction_count": summary.construction_count,
        "instances": summary.instance_ratio,
        "constructions": [
            {"pattern": r.pattern, "incoming_label": r.incoming_label,
             "constituent_number": r.constituent_number,
             "first_occurrence_year": r.first_occurrence_year, "frequency": r.frequency}
            for r in summary.rows
        ],
        "fit": None,
        "fit_error": None,
        "rules": [],
    }
    charts = []
    points = rank_frequency(profile) if profile.constructions else None
    try:
        fit = fit_power_law(points)
        report["fit"] = _rounded(fit_to_dict(fit))
        charts.append(_fit_chart(points, fit, f"{profile.lemma}: rank-frequency"))
    except (FitError, TypeError) as exc:
        report["fit_error"] = f"{type(exc).__name__}: {exc}"
    if args.rules and profile.constructions:
        with open(args.rules, encoding="utf-8") as fh:
            rules = rules_from_json(fh.read())
        for pred in apply_rules_report(rules, class_timeline(profile)):
            report["rules"].append({
                "rule": str(pred.rule), "antecedent_year": pred.antecedent_year,
                "consequent_year": pred.consequent_year, "satisfied": pred.satisfied,
            })
    if profile.constructions:
        cn = Chart(title=f"{profile.lemma}: constituent number vs frequency",
                   xlabel="constituent number", ylabel="frequency")
        cn.scatter([(c.constituent_number, c.frequency) for c in profile.constructions])
        charts.append(cn)
    _write(out, "report.json", _json(report), written)
    _write(out, "report.svg", stack(charts or [Chart(title="empty profile")]), written)
    return EXIT_OK


# ---------------------------------------------------------------- plumbing

COMMANDS = {
    "extract": cmd_extract, "fit": cmd_fit, "rules": cmd_rules,
    "correlate": cmd_correlate, "simulate": cmd_simulate, "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metasoc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="corpus -> constructions CSV + profile JSON")
    p.add_argument("corpus")
    p.add_argument("--lemma", action="append", required=True)
    p.add_argument("--min-cluster-size", type=int, default=7)
    p.add_argument("--min-coverage", type=float, default=0.04)
    p.add_argument("--one-pass", action="store_true", help="apply the coverage filter once")
    p.add_argument("--strict", action="store_true", help="fail on the first malformed sentence")
    p.add_argument("--dump-instances", action="store_true")

    p = sub.add_parser("fit", help="fit a model to a profile or a points CSV")
    p.add_argument("input", nargs="?")
    p.add_argument("--model", choices=sorted(FITTERS), default="power")
    p.add_argument("--method", choices=["nls", "loglog"], default="nls")
    p.add_argument("--batch", action="store_true", help="input is a directory of profiles")
    p.add_argument("--family", nargs="+", metavar="KEY=VALUE",
                   help="plot y = a x^-b for b in lo:hi:step, e.g. a=2 b=0.5:2.5:0.5")
    p.add_argument("--family-xmax", type=float, default=10.0)

    p = sub.add_parser("rules", help="mine transformation rules from profiles")
    p.add_argument("profiles")
    p.add_argument("--min-frequency", type=int, default=6)
    p.add_argument("--min-probability", type=float, default=0.8)
    p.add_argument("--denominator", choices=["antecedent", "both"], default="antecedent")

    p = sub.add_parser("correlate", help="Pearson matrix of b, foy, frequency")
    p.add_argument("table")

    p = sub.add_parser("simulate", help="run the sandpile or the adoption model")
    p.add_argument("kind", choices=["sandpile", "adoption"])
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--drops", type=int)
    p.add_argument("--threshold", type=int)
    p.add_argument("--topology", choices=["grid", "small_world", "scale_free"])
    p.add_argument("--n-nodes", dest="n_nodes", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--threshold-fraction", dest="threshold_fraction", type=float)
    p.add_argument("--innovation-rate", dest="innovation_rate", type=float)

    p = sub.add_parser("report", help="profile + fit + rule checks for one metaphor")
    p.add_argument("--profile", required=True)
    p.add_argument("--rules")

    p = sub.add_parser("replay", help="re-run a command from its manifest.json")
    p.add_argument("manifest")

    for name, sp in sub.choices.items():
        if name != "replay":
            sp.add_argument("-o", "--out", default=".", help="output directory")
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if args.command == "replay":
        with open(args.manifest, encoding="utf-8") as fh:
            manifest = json.load(fh)
        return main(manifest["argv"])
    if args.command == "fit" and not args.family and not args.input:
        print("error: fit needs an input file unless --family is given", file=sys.stderr)
        return EXIT_INPUT

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    started = datetime.now(timezone.utc).isoformat()
    written: list[str] = []
    code = COMMANDS[args.command](args, out, written)
    params = {k: v for k, v in vars(args).items() if k not in ("command", "out")}
    manifest = {
        "command": args.command,
        "argv": argv,
        "inputs": [v for k, v in params.items()
                   if k in ("corpus", "input", "profiles", "table", "config", "profile", "rules")
                   and v],
        "parameters": params,
        "seed": params.get("seed"),
        "outputs": [os.path.relpath(p, out) for p in written],
        "exit_code": code,
        "version": __version__,
        "started": started,
        "finished": datetime.now(timezone.utc).isoformat(),
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        fh.write(_json(manifest))
    return code


if __name__ == "__main__":
    sys.exit(main())
