"""Command-line front-end: cluster, benchmark, segment and ha inspect.

Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 the run
completed without converging.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cluster import InitializationError, result_document, run_fcm, run_hamfcm, ClusterConfig
from .evaluation import (
    FormatError,
    LabeledDataset,
    ParseError,
    load_dataset,
    minmax_normalize,
    render_report_csv,
    run_benchmark,
    write_report,
)
from .hedges import HedgeParams, enumerate_terms, normalize_params
from .imaging import DecodeError, load_image, save_image, segment, upscale_nearest


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_ENGINE_DEFAULTS = {
    "algo": "hamfcm",
    "m": 2.0,
    "m_min": 1.5,
    "m_max": 20.0,
    "seed": 1,
    "epsilon": 1e-6,
    "max_iter": 300,
    "normalize": "none",
}

_DEFAULTS = {
    "cluster": {**_ENGINE_DEFAULTS, "input": None, "clusters": None,
                "label_col": "none", "output": None},
    "benchmark": {**_ENGINE_DEFAULTS, "input": None, "label_col": None,
                  "runs": 20, "report": None},
    "segment": {**_ENGINE_DEFAULTS, "image": None, "clusters": None,
                "m_min": 2.0, "m_max": 40.0, "out": None, "upscale": False},
    "inspect": {
        "fm_small": 0.5,
        "mu_less": 0.25,
        "mu_possibly": 0.25,
        "mu_more": 0.25,
        "mu_very": 0.25,
        "depth": 3,
        "out": None,
    },
}


def _add_engine_flags(p):
    p.add_argument("--algo", choices=("hamfcm", "fcm"), help="clustering engine (default hamfcm)")
    p.add_argument("--m", type=float, help="fixed exponent for fcm (default 2); conflicts with --m-min/--m-max")
    p.add_argument("--m-min", type=float, help="lower exponent bound for hamfcm")
    p.add_argument("--m-max", type=float, help="upper exponent bound for hamfcm")
    p.add_argument("--seed", type=int, help="base RNG seed (default 1)")
    p.add_argument("--epsilon", type=float, help="centroid-movement stopping tolerance (default 1e-6)")
    p.add_argument("--max-iter", type=int, help="iteration cap (default 300)")
    p.add_argument("--normalize", choices=("minmax", "none"), help="feature scaling (default none)")


def build_parser() -> _Parser:
    parser = _Parser(prog="hamfcm", description="Fuzzy clustering with linguistic exponents")
    sub = parser.add_subparsers(dest="command")

    c = sub.add_parser("cluster", argument_default=argparse.SUPPRESS,
                       help="cluster a numeric delimited file")
    c.add_argument("--input", help="path to the delimited numeric file")
    c.add_argument("--clusters", type=int, help="number of clusters")
    c.add_argument("--label-col", choices=("first", "last", "none"),
                   help="column holding class labels, dropped before clustering (default none)")
    _add_engine_flags(c)
    c.add_argument("--output", help="write the result document here instead of stdout")
    c.add_argument("--config", help="JSON file whose keys mirror the long flag names; flags win")

    b = sub.add_parser("benchmark", argument_default=argparse.SUPPRESS,
                       help="run seeded repetitions against ground-truth labels")
    b.add_argument("--input", help="path to the labeled delimited file")
    b.add_argument("--label-col", choices=("first", "last"), help="column holding class labels")
    b.add_argument("--runs", type=int, help="number of seeded runs (default 20, seeds seed..seed+runs-1)")
    _add_engine_flags(b)
    b.add_argument("--report", help="report path; .json means structured, otherwise CSV (default stdout)")
    b.add_argument("--config", help="JSON file whose keys mirror the long flag names; flags win")

    s = sub.add_parser("segment", argument_default=argparse.SUPPRESS,
                       help="segment a PNG/PPM image into flat color regions")
    s.add_argument("--image", help="path to the input image")
    s.add_argument("--clusters", type=int, help="number of color regions")
    _add_engine_flags(s)
    s.add_argument("--out", help="output image path (default <image>_segmented.png)")
    s.add_argument("--upscale", action="store_true", default=argparse.SUPPRESS,
                   help="enlarge the 48x48 result back to the source size (nearest neighbor)")
    s.add_argument("--config", help="JSON file whose keys mirror the long flag names; flags win")

    ha = sub.add_parser("ha", help="hedge-algebra utilities")
    ha_sub = ha.add_subparsers(dest="ha_command")
    i = ha_sub.add_parser("inspect", argument_default=argparse.SUPPRESS,
                          help="dump the enumerated term table as CSV")
    i.add_argument("--fm-small", type=float, help="fuzziness of the small generator; big gets the rest")
    i.add_argument("--mu-less", type=float, help="fuzziness share of the less hedge")
    i.add_argument("--mu-possibly", type=float, help="fuzziness share of the possibly hedge")
    i.add_argument("--mu-more", type=float, help="fuzziness share of the more hedge")
    i.add_argument("--mu-very", type=float, help="fuzziness share of the very hedge")
    i.add_argument("--depth", type=int, help="maximum hedge count per term (default 3)")
    i.add_argument("--out", help="write the CSV here instead of stdout")
    i.add_argument("--config", help="JSON file whose keys mirror the long flag names; flags win")
    return parser


def _merge_options(provided: dict, defaults: dict) -> tuple[dict, set]:
    """Layer defaults under config-file values under explicit flags."""
    config_path = provided.pop("config", None)
    from_config: dict = {}
    if config_path is not None:
        try:
            raw = json.loads(Path(config_path).read_text())
        except json.JSONDecodeError as exc:
            raise FormatError(f"{config_path}: not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise FormatError(f"{config_path}: expected a flat JSON object")
        for key, value in raw.items():
            from_config[key.replace("-", "_")] = value
    unknown = set(from_config) - set(defaults)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    merged = {**defaults, **from_config, **provided}
    return merged, set(from_config) | set(provided)


def _resolve_engine(opts: dict, explicit: set) -> dict:
    algo = opts["algo"]
    if "m" in explicit and ({"m_min", "m_max"} & explicit):
        raise UsageError("--m is mutually exclusive with --m-min/--m-max")
    if algo == "fcm" and ({"m_min", "m_max"} & explicit):
        raise UsageError("--m-min/--m-max apply to hamfcm; fcm takes --m")
    if algo == "hamfcm" and "m" in explicit:
        raise UsageError("--m applies to fcm; hamfcm takes --m-min/--m-max")
    if opts["epsilon"] <= 0:
        raise UsageError("--epsilon must be positive")
    if opts["max_iter"] < 1:
        raise UsageError("--max-iter must be at least 1")
    if algo == "fcm":
        if opts["m"] <= 1:
            raise UsageError("--m must be greater than 1")
        return {"algo": algo, "m": opts["m"]}
    if not 1 < opts["m_min"] <= opts["m_max"]:
        raise UsageError("need 1 < --m-min <= --m-max")
    return {"algo": algo, "m_min": opts["m_min"], "m_max": opts["m_max"]}


def _require(opts: dict, keys: list[str], command: str):
    missing = [k for k in keys if opts.get(k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise UsageError(f"{command} requires {flags}")


def _load_features(opts) -> tuple:
    loaded = load_dataset(opts["input"], label_column=opts["label_col"])
    if isinstance(loaded, LabeledDataset):
        data, labels = loaded.data, loaded.labels
    else:
        data, labels = loaded, None
    if opts["normalize"] == "minmax":
        data = minmax_normalize(data)
    return data, labels


def _cmd_cluster(opts: dict, explicit: set) -> int:
    _require(opts, ["input", "clusters"], "cluster")
    if opts["clusters"] < 2:
        raise UsageError("--clusters must be at least 2")
    engine = _resolve_engine(opts, explicit)
    data, _ = _load_features(opts)
    if engine["algo"] == "fcm":
        result = run_fcm(data, opts["clusters"], engine["m"], epsilon=opts["epsilon"],
                         max_iter=opts["max_iter"], seed=opts["seed"])
    else:
        config = ClusterConfig(n_clusters=opts["clusters"], m_min=engine["m_min"],
                               m_max=engine["m_max"], epsilon=opts["epsilon"],
                               max_iter=opts["max_iter"], seed=opts["seed"])
        result = run_hamfcm(data, config)
    text = json.dumps(result_document(result), indent=2) + "\n"
    if opts["output"]:
        Path(opts["output"]).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if result.converged else 3


def _cmd_benchmark(opts: dict, explicit: set) -> int:
    _require(opts, ["input", "label_col", "runs"], "benchmark")
    if opts.get("label_col") == "none":
        raise UsageError("benchmark needs a label column (first or last)")
    if opts["runs"] < 1:
        raise UsageError("--runs must be at least 1")
    engine = _resolve_engine(opts, explicit)
    dataset = load_dataset(opts["input"], label_column=opts["label_col"])
    if opts["normalize"] == "minmax":
        dataset = LabeledDataset(minmax_normalize(dataset.data), dataset.labels,
                                 dataset.class_names)
    params = {k: v for k, v in engine.items() if k != "algo"}
    params.update(n_clusters=dataset.n_classes, epsilon=opts["epsilon"],
                  max_iter=opts["max_iter"])
    seeds = list(range(opts["seed"], opts["seed"] + opts["runs"]))
    report = run_benchmark(dataset, engine["algo"], params, runs=opts["runs"], seeds=seeds)
    if opts["report"]:
        fmt = "structured" if str(opts["report"]).endswith(".json") else "csv"
        write_report(report, opts["report"], fmt)
    else:
        sys.stdout.write(render_report_csv(report))
    return 0 if all(r.converged for r in report.records) else 3


def _cmd_segment(opts: dict, explicit: set) -> int:
    _require(opts, ["image", "clusters"], "segment")
    if opts["clusters"] < 2:
        raise UsageError("--clusters must be at least 2")
    engine = _resolve_engine(opts, explicit)
    img = load_image(opts["image"])
    kwargs = {k: v for k, v in engine.items() if k != "algo"}
    out_img, result = segment(img, opts["clusters"], engine["algo"], seed=opts["seed"],
                              epsilon=opts["epsilon"], max_iter=opts["max_iter"], **kwargs)
    if opts["upscale"]:
        out_img = upscale_nearest(out_img, img.shape[:2])
    out_path = opts["out"] or str(Path(opts["image"]).with_suffix("")) + "_segmented.png"
    save_image(out_img, out_path)
    print(out_path)
    return 0 if result.converged else 3


def _cmd_inspect(opts: dict) -> int:
    if not 0 < opts["fm_small"] < 1:
        raise UsageError("--fm-small must lie strictly between 0 and 1")
    if min(opts["mu_less"], opts["mu_possibly"], opts["mu_more"], opts["mu_very"]) <= 0:
        raise UsageError("hedge mu values must be positive")
    if opts["depth"] < 1:
        raise UsageError("--depth must be at least 1")
    params = normalize_params(HedgeParams(
        fm_small=opts["fm_small"],
        fm_big=1.0 - opts["fm_small"],
        mu_less=opts["mu_less"],
        mu_possibly=opts["mu_possibly"],
        mu_more=opts["mu_more"],
        mu_very=opts["mu_very"],
        depth=opts["depth"],
    ))
    lines = ["term,depth,v,fm,interval_lo,interval_hi"]
    for sem in enumerate_terms(params):
        lines.append(",".join([
            str(sem.term), str(sem.term.depth), repr(sem.v), repr(sem.fm),
            repr(sem.lo), repr(sem.hi),
        ]))
    text = "\n".join(lines) + "\n"
    if opts["out"]:
        Path(opts["out"]).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        command = getattr(args, "command", None)
        if command is None:
            raise UsageError("a subcommand is required (cluster, benchmark, segment, ha)")
        if command == "ha":
            if getattr(args, "ha_command", None) != "inspect":
                raise UsageError("the ha subcommand is: inspect")
            provided = {k: v for k, v in vars(args).items()
                        if k not in ("command", "ha_command")}
            opts, _ = _merge_options(provided, _DEFAULTS["inspect"])
            return _cmd_inspect(opts)
        provided = {k: v for k, v in vars(args).items() if k != "command"}
        opts, explicit = _merge_options(provided, _DEFAULTS[command])
        handler = {"cluster": _cmd_cluster, "benchmark": _cmd_benchmark,
                   "segment": _cmd_segment}[command]
        return handler(opts, explicit)
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, FormatError, DecodeError, InitializationError,
            FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
