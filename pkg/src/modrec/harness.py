"""Monte-Carlo experiments: labelled datasets, accuracy-vs-SNR curves, feature-subset search."""
from __future__ import annotations

import itertools
import math
import zlib
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import alrt as _alrt
from .dtree import DEFAULT_MAX_DEPTH, DEFAULT_MIN_LEAF, train_tree
from .errors import DomainError, ModrecError, TrainingError
from .features import ALL_FAMILIES, CANONICAL_ORDER, FeatureFamily, extract, feature_names
from .fileio import fmt_float, write_csv
from .sigsynth import MixSpec, ModScheme, SignalConfig, awgn, mix_cochannel, synthesize
from .svm import DEFAULT_C, DEFAULT_G, ovo_train

_S = ModScheme
CLASS_SETS = {
    "single6": ("ASK2", "ASK4", "PSK2", "PSK4", "FSK2", "FSK4"),
    "mixed6": tuple(MixSpec(a, b).label for a in (_S.ASK4, _S.PSK4, _S.FSK4)
                    for b in (_S.ASK4, _S.PSK4, _S.FSK4) if a is not b),
    "mixedpsk6": tuple(h.label for h in _alrt.mixed_psk_hypotheses()),
    "singlepsk3": ("PSK2", "PSK4", "PSK8"),
}
ALGORITHMS = ("alrt", "tree", "svm")


def parse_classes(text) -> tuple:
    """A named class set or a comma list of scheme / mix labels, canonicalised."""
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        key = str(text).strip().lower()
        if key in CLASS_SETS:
            return CLASS_SETS[key]
        items = [t for t in str(text).split(",") if t.strip()]
    out = []
    for item in items:
        item = str(item).strip()
        out.append(MixSpec.parse(item).label if "+" in item else ModScheme.parse(item).label)
    if not out:
        raise DomainError("empty class list")
    if len(set(out)) != len(out):
        raise DomainError("duplicate class in list")
    return tuple(out)


def parse_snr_grid(text) -> tuple:
    """``a:b:step`` (inclusive), a comma list, or a single value; ``inf`` allowed."""
    if isinstance(text, (int, float)):
        return (float(text),)
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    s = str(text).strip()
    if ":" in s:
        parts = s.split(":")
        if len(parts) not in (2, 3):
            raise DomainError(f"bad SNR range {text!r}")
        a, b = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 1.0
        if step <= 0 or b < a:
            raise DomainError(f"bad SNR range {text!r}")
        n = int(math.floor((b - a) / step + 1e-9)) + 1
        return tuple(round(a + i * step, 10) for i in range(n))
    vals = tuple(float(v) for v in s.split(",") if v.strip())
    if not vals:
        raise DomainError("empty SNR grid")
    return vals


def is_mixed(label: str) -> bool:
    return "+" in label


def trial_seed(seed: int, label: str, snr_db: float, trial: int) -> np.random.SeedSequence:
    """Independent stream per (master seed, class, snr, trial)."""
    snr_key = 2**40 if math.isinf(snr_db) else int(round(snr_db * 1000)) + 2**31
    return np.random.SeedSequence([int(seed) & (2**64 - 1), zlib.crc32(label.encode()), snr_key, int(trial)])


def received_signal(label: str, cfg: SignalConfig, snr_db: float, rng: np.random.Generator):
    if is_mixed(label):
        clean, _ = mix_cochannel(MixSpec.parse(label), cfg, rng)
    else:
        clean = synthesize(ModScheme.parse(label), cfg, rng)
    return awgn(clean, snr_db, rng)


@dataclass(frozen=True)
class ExperimentConfig:
    classes: tuple = CLASS_SETS["single6"]
    snr_db: tuple = tuple(range(-10, 21, 2))
    trials: int = 50
    signal: SignalConfig = field(default_factory=SignalConfig)
    train_fraction: float = 0.7
    seed: int = 0
    algo: str = "svm"
    families: frozenset = ALL_FAMILIES
    C: float = DEFAULT_C
    g: float = DEFAULT_G
    max_depth: int | None = DEFAULT_MAX_DEPTH
    min_leaf: int = DEFAULT_MIN_LEAF
    pooled: bool = False

    def __post_init__(self):
        object.__setattr__(self, "classes", parse_classes(self.classes))
        object.__setattr__(self, "snr_db", parse_snr_grid(self.snr_db))
        if isinstance(self.families, (str, list, tuple, set)) or not isinstance(self.families, frozenset):
            object.__setattr__(self, "families", FeatureFamily.parse_set(self.families))
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not 0.0 < self.train_fraction < 1.0:
            raise DomainError("train_fraction must lie in (0, 1)")
        if not self.snr_db:
            raise DomainError("SNR grid must not be empty")
        if not self.families:
            raise DomainError("at least one feature family is required")
        if self.algo not in ALGORITHMS:
            raise DomainError(f"algo must be one of {ALGORITHMS}")

    def replace(self, **changes) -> "ExperimentConfig":
        from dataclasses import replace

        return replace(self, **changes)

    @property
    def n_train(self) -> int:
        return int(round(self.train_fraction * self.trials))


# -- datasets -----------------------------------------------------------------

@dataclass
class Dataset:
    labels: list
    snr_db: np.ndarray
    trial: np.ndarray
    X: np.ndarray
    names: tuple
    rejects: dict  # (label, snr) -> count

    def __len__(self):
        return len(self.labels)

    def select(self, mask) -> "Dataset":
        mask = np.asarray(mask, dtype=bool)
        return Dataset([l for l, m in zip(self.labels, mask) if m], self.snr_db[mask], self.trial[mask],
                       self.X[mask], self.names, dict(self.rejects))

    def columns(self, names: Sequence[str]) -> "Dataset":
        idx = [self.names.index(n) for n in names]
        return Dataset(list(self.labels), self.snr_db, self.trial, self.X[:, idx], tuple(names), dict(self.rejects))

    def csv_rows(self):
        for lab, snr, t, row in zip(self.labels, self.snr_db, self.trial, self.X):
            yield [lab, fmt_float(snr), int(t), *(fmt_float(v) for v in row)]

    def to_csv(self, path=None):
        return write_csv(path, ["label", "snr_db", "trial", *self.names], self.csv_rows())

    @classmethod
    def from_rows(cls, header, rows) -> "Dataset":
        if header[:3] != ["label", "snr_db", "trial"]:
            raise DomainError("dataset CSV must start with label,snr_db,trial")
        names = tuple(header[3:])
        labels = [r[0] for r in rows]
        snr = np.array([float(r[1]) for r in rows])
        trial = np.array([int(r[2]) for r in rows], dtype=np.int64)
        X = np.array([[float(v) for v in r[3:]] for r in rows], dtype=float).reshape(len(rows), len(names))
        return cls(labels, snr, trial, X, names, {})


def generate_dataset(cfg: ExperimentConfig, progress: Callable | None = None) -> Dataset:
    """One feature row per (class, SNR, trial); failed extractions are counted, not dropped silently."""
    names = feature_names(cfg.families)
    labels, snrs, trials, rows = [], [], [], []
    rejects = {}
    for snr in cfg.snr_db:
        for label in cfg.classes:
            bad = 0
            for t in range(cfg.trials):
                rng = np.random.default_rng(trial_seed(cfg.seed, label, snr, t))
                try:
                    sig = received_signal(label, cfg.signal, snr, rng)
                    fv = extract(sig, cfg.signal, cfg.families)
                    if not np.all(np.isfinite(fv.values)):
                        raise DomainError("non-finite feature")
                except ModrecError:
                    bad += 1
                    continue
                labels.append(label)
                snrs.append(snr)
                trials.append(t)
                rows.append(fv.values)
            rejects[(label, snr)] = bad
            if progress is not None:
                progress(label, snr)
    X = np.array(rows, dtype=float).reshape(len(rows), len(names))
    return Dataset(labels, np.array(snrs, dtype=float), np.array(trials, dtype=np.int64), X, names, rejects)


# -- accuracy curves ----------------------------------------------------------

@dataclass(frozen=True)
class CurvePoint:
    snr_db: float
    label: str
    trials: int
    correct: int
    rejects: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.trials if self.trials else float("nan")


@dataclass
class AccuracyCurve:
    algo: str
    classes: tuple
    points: list

    def snrs(self) -> tuple:
        return tuple(dict.fromkeys(p.snr_db for p in self.points))

    def point(self, snr_db: float, label: str) -> CurvePoint:
        for p in self.points:
            if p.snr_db == snr_db and p.label == label:
                return p
        raise KeyError((snr_db, label))

    def accuracy(self, snr_db: float, label: str) -> float:
        return self.point(snr_db, label).accuracy

    def overall(self, snr_db: float) -> float:
        pts = [p for p in self.points if p.snr_db == snr_db]
        n = sum(p.trials for p in pts)
        return sum(p.correct for p in pts) / n if n else float("nan")

    def overall_series(self) -> list:
        return [self.overall(s) for s in self.snrs()]

    def csv_rows(self):
        for snr in self.snrs():
            pts = [p for p in self.points if p.snr_db == snr]
            for p in pts:
                yield [fmt_float(snr), p.label, p.trials, p.correct, fmt_float(p.accuracy), p.rejects]
            n = sum(p.trials for p in pts)
            c = sum(p.correct for p in pts)
            yield [fmt_float(snr), "ALL", n, c, fmt_float(c / n if n else float("nan")), sum(p.rejects for p in pts)]

    def to_csv(self, path=None):
        return write_csv(path, ["snr_db", "class", "trials", "correct", "accuracy", "rejects"], self.csv_rows())

    def to_svg(self, path=None, width: int = 640, height: int = 400) -> str | None:
        svg = render_svg(self, width, height)
        if path is None:
            return svg
        with open(path, "w") as fh:
            fh.write(svg)
        return None


Fitter = Callable[[np.ndarray, list], Callable[[np.ndarray], list]]


def _fitter(cfg: ExperimentConfig) -> Fitter:
    if cfg.algo == "svm":
        def fit(X, y):
            return ovo_train(X, y, cfg.C, cfg.g, seed=cfg.seed).predict
    elif cfg.algo == "tree":
        def fit(X, y):
            return train_tree(X, y, cfg.max_depth, cfg.min_leaf).predict
    else:
        raise DomainError(f"{cfg.algo} is not a feature-based classifier")
    return fit


def _check_split(labels: list, classes: tuple, what: str, snr: float) -> None:
    missing = [c for c in classes if c not in set(labels)]
    if missing:
        raise TrainingError(f"degenerate split at {snr:g} dB: no {what} rows for {', '.join(missing)}")


def _feature_curve(cfg: ExperimentConfig, data: Dataset, fit: Fitter) -> AccuracyCurve:
    is_train = data.trial < cfg.n_train
    points = []
    pooled_model = None
    if cfg.pooled:
        lab = [l for l, m in zip(data.labels, is_train) if m]
        _check_split(lab, cfg.classes, "training", float("nan"))
        pooled_model = fit(data.X[is_train], lab)
    for snr in cfg.snr_db:
        at = data.snr_db == snr
        tr = at & is_train
        te = at & ~is_train
        if pooled_model is None:
            lab = [l for l, m in zip(data.labels, tr) if m]
            _check_split(lab, cfg.classes, "training", snr)
            model = fit(data.X[tr], lab)
        else:
            model = pooled_model
        test_labels = [l for l, m in zip(data.labels, te) if m]
        _check_split(test_labels, cfg.classes, "test", snr)
        pred = model(data.X[te])
        for c in cfg.classes:
            hits = [p == c for p, l in zip(pred, test_labels) if l == c]
            points.append(CurvePoint(snr, c, len(hits), int(sum(hits)), data.rejects.get((c, snr), 0)))
    return AccuracyCurve(cfg.algo, cfg.classes, points)


def _alrt_curve(cfg: ExperimentConfig) -> AccuracyCurve:
    hyps = [_alrt.hypothesis_for(c) for c in cfg.classes]
    points = []
    for snr in cfg.snr_db:
        for h in hyps:
            correct = 0
            for t in range(cfg.trials):
                rng = np.random.default_rng(trial_seed(cfg.seed, h.label, snr, t))
                sig = received_signal(h.label, cfg.signal, snr, rng)
                obs = _alrt.matched_filter_symbols(sig, cfg.signal, snr)
                correct += _alrt.alrt_classify(obs, hyps) == h.label
            points.append(CurvePoint(snr, h.label, cfg.trials, correct))
    return AccuracyCurve("alrt", cfg.classes, points)


def run_curve(cfg: ExperimentConfig, dataset: Dataset | None = None, fitter: Fitter | None = None) -> AccuracyCurve:
    """Accuracy per (SNR, class). Feature classifiers train on trials ``< n_train`` at each SNR.

    ``dataset`` reuses already-extracted features; ``fitter`` swaps in a
    custom ``fit(X, labels) -> predict`` classifier.
    """
    if cfg.algo == "alrt" and fitter is None:
        return _alrt_curve(cfg)
    if cfg.n_train < 1 or cfg.n_train >= cfg.trials:
        raise TrainingError(f"{cfg.trials} trials leave an empty train or test part at fraction {cfg.train_fraction}")
    data = dataset if dataset is not None else generate_dataset(cfg)
    return _feature_curve(cfg, data, fitter or _fitter(cfg))


# -- feature-family search ----------------------------------------------------

def family_subsets() -> list:
    out = []
    for k in range(1, len(CANONICAL_ORDER) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(CANONICAL_ORDER, k))
    return out


def subset_name(families) -> str:
    return "+".join(f.value for f in CANONICAL_ORDER if f in families)


@dataclass(frozen=True)
class SearchEntry:
    families: frozenset
    n_features: int
    per_snr: tuple
    mean_accuracy: float
    rank: int = 0
    dominated_by: tuple = ()  # singleton families that beat the winner at some SNR

    @property
    def name(self) -> str:
        return subset_name(self.families)


@dataclass
class SearchReport:
    snrs: tuple
    entries: list

    @property
    def best(self) -> SearchEntry:
        return self.entries[0]

    def entry(self, families) -> SearchEntry:
        fam = FeatureFamily.parse_set(families) if not isinstance(families, frozenset) else families
        return next(e for e in self.entries if e.families == fam)

    def to_csv(self, path=None):
        header = ["rank", "families", "n_features", "mean_accuracy",
                  *(f"acc_{fmt_float(s)}" for s in self.snrs), "dominance_flag"]
        rows = [[e.rank, e.name, e.n_features, fmt_float(e.mean_accuracy), *(fmt_float(a) for a in e.per_snr),
                 "+".join(e.dominated_by)] for e in self.entries]
        return write_csv(path, header, rows)


def feature_search(cfg: ExperimentConfig, dataset: Dataset | None = None) -> SearchReport:
    """Score every non-empty family subset with the SVM on the same rows and splits."""
    base = cfg.replace(algo="svm", families=ALL_FAMILIES)
    data = dataset if dataset is not None else generate_dataset(base)
    entries = []
    for fam in family_subsets():
        names = feature_names(fam)
        curve = run_curve(base.replace(families=fam), data.columns(names))
        per = tuple(curve.overall_series())
        entries.append(SearchEntry(fam, len(names), per, float(np.mean(per))))
    order = sorted(range(len(entries)), key=lambda i: (-entries[i].mean_accuracy, entries[i].n_features, i))
    ranked = [entries[i] for i in order]
    win = ranked[0]
    flags = tuple(e.name for e in ranked if len(e.families) == 1
                  and any(a > b for a, b in zip(e.per_snr, win.per_snr)))
    final = []
    for r, e in enumerate(ranked, 1):
        final.append(SearchEntry(e.families, e.n_features, e.per_snr, e.mean_accuracy, r,
                                 flags if e is win else ()))
    return SearchReport(tuple(cfg.snr_db), final)


# -- minimal SVG chart --------------------------------------------------------

_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


def render_svg(curve: AccuracyCurve, width: int = 640, height: int = 400) -> str:
    snrs = curve.snrs()
    left, right, top, bottom = 50, 130, 20, 40
    pw, ph = width - left - right, height - top - bottom
    lo, hi = min(snrs), max(snrs)
    span = hi - lo if hi > lo else 1.0

    def xy(s, a):
        return left + (s - lo) / span * pw, top + (1.0 - a) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-size="11">',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#000"/>']
    for a in (0.0, 0.5, 1.0):
        _, y = xy(lo, a)
        out.append(f'<text x="{left - 6}" y="{y + 4:.1f}" text-anchor="end">{a:.1f}</text>')
    for s in snrs:
        x, _ = xy(s, 0.0)
        out.append(f'<text x="{x:.1f}" y="{top + ph + 15}" text-anchor="middle">{s:g}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 5}" text-anchor="middle">SNR (dB)</text>')
    series = [(c, [curve.accuracy(s, c) for s in snrs]) for c in curve.classes]
    series.append(("ALL", curve.overall_series()))
    for k, (name, acc) in enumerate(series):
        color = "#000" if name == "ALL" else _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{x:.1f},{y:.1f}" for x, y in (xy(s, a) for s, a in zip(snrs, acc)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{left + pw + 8}" y="{top + 14 * (k + 1)}" fill="{color}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
