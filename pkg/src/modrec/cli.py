"""``modrec`` command line.

Every subcommand accepts ``--config FILE`` (``key = value`` lines); flags
given on the command line win over the file. Exit codes: 0 success,
1 usage error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .dtree import save_tree, train_tree
from .errors import ModrecError
from .features import ALL_FAMILIES, FeatureFamily, extract
from .fileio import fmt_float, read_config, read_csv, read_waveform, write_csv, write_waveform
from .harness import (CLASS_SETS, Dataset, ExperimentConfig, feature_search, generate_dataset, parse_classes,
                      parse_snr_grid, received_signal, run_curve, trial_seed)
from .sigsynth import SignalConfig
from .svm import save_svm, ovo_train

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _signal_flags(p):
    p.add_argument("--fc", type=float, help="carrier frequency in Hz (default 70)")
    p.add_argument("--fs", type=float, help="sample rate in Hz (default 400)")
    p.add_argument("--rs", type=float, help="symbol rate in baud (default 2)")
    p.add_argument("--n-symbols", type=int, help="symbols per signal (default 1000)")


def _experiment_flags(p, classes_default):
    p.add_argument("--classes", help=f"class set ({', '.join(CLASS_SETS)}) or comma list (default {classes_default})")
    p.add_argument("--snr", help="SNR grid: a:b:step, comma list or one value")
    p.add_argument("--trials", type=int, help="trials per class and SNR (default 50)")
    _signal_flags(p)


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="modrec", description="Digital modulation recognition toolkit.")
    root.add_argument("--version", action="version", version=f"modrec {__version__}")
    sub = root.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    def cmd(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="key = value file; command-line flags override it")
        p.add_argument("--seed", type=int, help="master random seed (default 0)")
        return p

    p = cmd("synth", "synthesize one single or mixed waveform")
    p.add_argument("--scheme", help="scheme (e.g. PSK4) or mix (e.g. 2ASK4+PSK4)")
    p.add_argument("--snr-db", "--snr", dest="snr_db", help="SNR in dB (default inf, noiseless)")
    p.add_argument("--out", help="output waveform text file")
    _signal_flags(p)

    p = cmd("extract", "extract features from a waveform file")
    p.add_argument("--in", dest="infile", help="waveform text file")
    p.add_argument("--families", help="comma list of inst,hoc,cyc,wav (default all)")
    p.add_argument("--out", help="output CSV (default stdout)")

    p = cmd("dataset", "generate a labelled feature table")
    _experiment_flags(p, "single6")
    p.add_argument("--families", help="comma list of inst,hoc,cyc,wav (default all)")
    p.add_argument("--out", help="output CSV")

    p = cmd("train", "train a classifier on a dataset CSV")
    p.add_argument("--algo", choices=("tree", "svm"))
    p.add_argument("--in", dest="infile", help="dataset CSV")
    p.add_argument("--model", help="output model file")
    p.add_argument("--C", dest="C", type=float, help="SVM penalty (default 0.5)")
    p.add_argument("--g", dest="g", type=float, help="RBF width (default 0.05)")
    p.add_argument("--max-depth", type=int, help="tree depth limit (default 8)")
    p.add_argument("--min-leaf", type=int, help="tree minimum leaf size (default 5)")

    p = cmd("alrt", "likelihood-ratio accuracy over an SNR grid")
    _experiment_flags(p, "mixedpsk6")
    p.add_argument("--out", help="output CSV (default alrt_<classes>.csv)")

    p = cmd("curve", "accuracy-vs-SNR curve for one classifier")
    _experiment_flags(p, "single6")
    p.add_argument("--algo", choices=("alrt", "tree", "svm"))
    p.add_argument("--families", help="comma list of inst,hoc,cyc,wav (default all)")
    p.add_argument("--train-fraction", type=float, help="share of trials used for training (default 0.7)")
    p.add_argument("--pooled", action="store_const", const=True, help="train one model over all SNRs")
    p.add_argument("--out", help="output CSV (default curve_<classes>_<algo>.csv)")
    p.add_argument("--svg", help="also write an SVG chart here")

    p = cmd("search", "rank all feature-family subsets with the SVM")
    _experiment_flags(p, "single6")
    p.add_argument("--train-fraction", type=float, help="share of trials used for training (default 0.7)")
    p.add_argument("--out", help="output CSV (default search_<classes>.csv)")
    return root


_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def _merge_config(parser: argparse.ArgumentParser, args: argparse.Namespace) -> argparse.Namespace:
    if not args.config:
        return args
    try:
        conf = read_config(args.config)
    except OSError as exc:
        raise ModrecError(f"cannot read config: {exc}") from exc
    sub = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions}
    by_key = {d.lower(): d for d in actions}
    by_key.update({"in": "infile", "input": "infile"})
    if "snr_db" in actions:
        by_key["snr"] = "snr_db"
    elif "snr" in actions:
        by_key["snr_db"] = "snr"
    for key, raw in conf.items():
        dest = by_key.get(key, key)
        if dest not in actions or dest in ("help", "config"):
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        if getattr(args, dest) is not None:
            continue  # command line wins
        act = actions[dest]
        if isinstance(act, argparse._StoreConstAction):
            if raw.lower() not in _BOOL:
                raise UsageError(f"config key {key!r} expects a boolean")
            value = _BOOL[raw.lower()]
        else:
            try:
                value = act.type(raw) if act.type else raw
            except ValueError:
                raise UsageError(f"config key {key!r}: bad value {raw!r}") from None
            if act.choices and value not in act.choices:
                raise UsageError(f"config key {key!r} must be one of {', '.join(act.choices)}")
        setattr(args, dest, value)
    return args


def _require(args, *names):
    for n in names:
        if getattr(args, n) is None:
            flag = {"infile": "in"}.get(n, n).replace("_", "-")
            raise UsageError(f"missing required flag --{flag}")


def _signal_config(args, seed=0) -> SignalConfig:
    kw = {}
    for flag, name in (("fc", "carrier_hz"), ("fs", "sample_hz"), ("rs", "symbol_baud"), ("n_symbols", "n_symbols")):
        v = getattr(args, flag, None)
        if v is not None:
            kw[name] = v
    return SignalConfig(rng_seed=seed, **kw)


def _experiment(args, classes_default, algo="svm") -> ExperimentConfig:
    kw = dict(
        classes=parse_classes(args.classes or classes_default),
        snr_db=parse_snr_grid(args.snr if args.snr is not None else "-10:20:2"),
        trials=args.trials if args.trials is not None else 50,
        signal=_signal_config(args),
        seed=args.seed or 0,
        algo=algo,
    )
    if getattr(args, "families", None):
        kw["families"] = FeatureFamily.parse_set(args.families)
    if getattr(args, "train_fraction", None) is not None:
        kw["train_fraction"] = args.train_fraction
    if getattr(args, "pooled", None):
        kw["pooled"] = True
    return ExperimentConfig(**kw)


def _tag(classes_arg, default):
    text = classes_arg or default
    return text if text.lower() in CLASS_SETS else "custom"


def _cmd_synth(args):
    _require(args, "scheme", "out")
    seed = args.seed or 0
    snr = float(args.snr_db) if args.snr_db is not None else math.inf
    cfg = _signal_config(args, seed)
    label = parse_classes(args.scheme)[0]
    rng = np.random.default_rng(trial_seed(seed, label, snr, 0))
    sig = received_signal(label, cfg, snr, rng)
    write_waveform(args.out, sig, cfg.carrier_hz, cfg.symbol_baud)


def _cmd_extract(args):
    _require(args, "infile")
    sig, header = read_waveform(args.infile)
    kw = {"sample_hz": header["fs"]}
    if "fc" in header:
        kw["carrier_hz"] = header["fc"]
    if "rs" in header:
        kw["symbol_baud"] = header["rs"]
    sps = kw["sample_hz"] / kw.get("symbol_baud", 2.0)
    kw["n_symbols"] = max(1, int(len(sig) // round(sps)))
    cfg = SignalConfig(**kw)
    fams = FeatureFamily.parse_set(args.families) if args.families else ALL_FAMILIES
    fv = extract(sig, cfg, fams)
    text = write_csv(None if args.out in (None, "-") else args.out, list(fv.names), [list(fv.values)])
    if text is not None:
        sys.stdout.write(text)


def _cmd_dataset(args):
    _require(args, "out")
    cfg = _experiment(args, "single6")
    data = generate_dataset(cfg)
    data.to_csv(args.out)
    bad = sum(data.rejects.values())
    if bad:
        print(f"{bad} trial(s) rejected during extraction", file=sys.stderr)


def _cmd_train(args):
    _require(args, "algo", "infile", "model")
    data = Dataset.from_rows(*read_csv(args.infile))
    if args.algo == "svm":
        kw = {k: getattr(args, k) for k in ("C", "g") if getattr(args, k) is not None}
        save_svm(ovo_train(data.X, data.labels, seed=args.seed or 0, **kw), args.model)
    else:
        kw = {k: getattr(args, k) for k in ("max_depth", "min_leaf") if getattr(args, k) is not None}
        save_tree(train_tree(data.X, data.labels, **kw), args.model)


def _cmd_alrt(args):
    cfg = _experiment(args, "mixedpsk6", algo="alrt")
    curve = run_curve(cfg)
    rows = []
    for snr in curve.snrs():
        for c in cfg.classes:
            rows.append([fmt_float(snr), c, fmt_float(curve.accuracy(snr, c))])
        rows.append([fmt_float(snr), "ALL", fmt_float(curve.overall(snr))])
    write_csv(args.out or f"alrt_{_tag(args.classes, 'mixedpsk6')}.csv", ["snr_db", "class", "accuracy"], rows)


def _cmd_curve(args):
    _require(args, "algo")
    cfg = _experiment(args, "single6", algo=args.algo)
    curve = run_curve(cfg)
    curve.to_csv(args.out or f"curve_{_tag(args.classes, 'single6')}_{args.algo}.csv")
    if args.svg:
        curve.to_svg(args.svg)


def _cmd_search(args):
    cfg = _experiment(args, "single6")
    report = feature_search(cfg)
    report.to_csv(args.out or f"search_{_tag(args.classes, 'single6')}.csv")


_COMMANDS = {"synth": _cmd_synth, "extract": _cmd_extract, "dataset": _cmd_dataset, "train": _cmd_train,
             "alrt": _cmd_alrt, "curve": _cmd_curve, "search": _cmd_search}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        args = _merge_config(parser, args)
        _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"modrec {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModrecError, ValueError, OSError) as exc:
        print(f"modrec {args.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
