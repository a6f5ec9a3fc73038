"""Batch experiment runner.

Usage::

    finsec CONFIG [--out DIR] [--max-n CAP] [--threads T]

CONFIG is a flat ``key = value`` text file, one experiment per file.  Blank
lines and lines starting with ``#`` are ignored; unknown keys are an error.

Keys
----
experiment      analyze | interlace | cuntz | widom | arveson | essential-scan
                | restrict | stabilize | alpha-parity                (required)
sequence        toeplitz | hankel | block_flip | arveson | cuntz_difference
                | alternating_diag | diag_geometric | zero | identity
                | compact | weighted_compact | exf340
symbol          list of (k, re, im) triples, e.g. ``[(0, 2, 0), (1, 1, 0)]``;
                repeated frequencies add up
block           finite leading block of a compact operator as a nested list,
                e.g. ``[[1, 0], [0, 0.5]]``
ratio           ratio of diag_geometric (default 0.5)
N               Cuntz arity, or length of the exf340 / random chain
n_min, n_max, step    horizon (inclusive)
sizes           explicit size list for widom, e.g. ``[16, 64, 256]``
word_length     longest Cuntz word checked (default 3)
chain           exf340 | random   (interlace)
bound           entry bound of a random chain (default 10)
seed, degree, pairs   random symbols for widom / random chains
alpha           rank of the stabilizing perturbation
subsequence     all | even | odd   (analyze, stabilize)
lambda          list of points, or ``lambda_min``, ``lambda_max``, ``lambda_count``
eps             list of radii for point counts (one value for fractality)
tau_zero, tau_gap, tau_stab, tau_compact, tail, probe_depth, growth_min, tol
expect          expected labels, comma separated; for essential-scan
                ``dichotomy`` or ``lam:Class`` pairs
dat             true | false   write gnuplot two-column .dat files
out             output directory (``--out`` wins)

Reports
-------
profile.csv  n,k,sigma_k
verdict.csv  key,value
points.csv   lambda,epsilon,n,count,class
identity.csv name,n,residual,pass

Every report starts with ``#`` comment lines listing the thresholds in use,
followed by the mandatory header row.  Numbers are written with 17
significant digits.

Exit codes: 0 expectations met, 1 mismatch, 2 invalid config,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import ast
import csv
import itertools
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import identities, matgen, seqlab
from .exceptions import FinsecError, NegativeSquare, NumericalBreakdown, SpectrumMismatch
from .spectra import count_in_interval
from .symbols import FourierSymbol, random_symbol
from .validation import DEFAULT_MAX_N, check_horizon

log = logging.getLogger("finsec")

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

EXPERIMENTS = ("analyze", "interlace", "cuntz", "widom", "arveson", "essential-scan",
               "restrict", "stabilize", "alpha-parity")


class ConfigError(FinsecError, ValueError):
    pass


class Mismatch(FinsecError):
    pass


def _literal(key):
    def parse(text):
        try:
            return ast.literal_eval(text)
        except (ValueError, SyntaxError) as exc:
            raise ConfigError(f"{key}: cannot parse {text!r}") from exc
    return parse


def _bool(text):
    t = text.lower()
    if t in ("true", "yes", "1"):
        return True
    if t in ("false", "no", "0"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _floats(text):
    v = ast.literal_eval(text)
    return [float(x) for x in (v if isinstance(v, (list, tuple)) else [v])]


KEYS = {
    "experiment": str, "sequence": str, "symbol": _literal("symbol"), "block": _literal("block"),
    "ratio": float, "N": int, "n_min": int, "n_max": int, "step": int, "sizes": _literal("sizes"),
    "word_length": int, "chain": str, "bound": float, "seed": int, "degree": int, "pairs": int,
    "alpha": int, "subsequence": str, "lambda": _floats, "lambda_min": float, "lambda_max": float,
    "lambda_count": int, "eps": _floats, "tau_zero": float, "tau_gap": float, "tau_stab": float,
    "tau_compact": float, "tail": float, "probe_depth": int, "growth_min": int, "tol": float,
    "expect": str, "dat": _bool, "out": str,
}

THRESHOLD_KEYS = ("tau_zero", "tau_gap", "tau_stab", "tau_compact", "tail", "probe_depth", "growth_min", "eps", "tol")

DEFAULTS = {
    "tau_zero": seqlab.TAU_ZERO, "tau_gap": seqlab.TAU_GAP, "tau_stab": seqlab.TAU_STAB,
    "tau_compact": seqlab.TAU_COMPACT, "tail": seqlab.TAIL, "probe_depth": seqlab.PROBE_DEPTH,
    "growth_min": seqlab.GROWTH_MIN, "eps": [0.05, 0.1, 0.2], "ratio": 0.5, "word_length": 3,
    "bound": 10.0, "seed": 0, "degree": 8, "pairs": 50, "subsequence": "all", "dat": False,
}


@dataclass
class ExperimentConfig:
    values: dict
    source: str = "<config>"
    out: Path = Path(".")
    max_n: int = DEFAULT_MAX_N
    threads: int = 1
    thresholds: dict = field(default_factory=dict)

    def __getitem__(self, key):
        if key in self.values:
            return self.values[key]
        if key in DEFAULTS:
            return DEFAULTS[key]
        raise ConfigError(f"{self.source}: missing required key '{key}'")

    def get(self, key, default=None):
        try:
            return self[key]
        except ConfigError:
            return default

    @property
    def experiment(self) -> str:
        return self["experiment"]

    def horizon(self) -> list[int]:
        try:
            return check_horizon((self["n_min"], self["n_max"], self.get("step", 1)), self.max_n)
        except ValueError as exc:
            raise ConfigError(f"n_min/n_max/step: {exc}") from exc


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = (s.strip() for s in line.partition("="))
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key '{key}'")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: key '{key}' given twice")
        try:
            values[key] = KEYS[key](value)
        except ConfigError:
            raise
        except (ValueError, SyntaxError, TypeError) as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for '{key}': {value!r}") from exc
    cfg = ExperimentConfig(values, source)
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    if "experiment" not in cfg.values:
        raise ConfigError(f"{cfg.source}: missing required key 'experiment'")
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment: unknown experiment '{cfg.experiment}', choose from {', '.join(EXPERIMENTS)}")
    for key in THRESHOLD_KEYS:
        v = cfg.get(key)
        if v is None:
            continue
        for x in (v if isinstance(v, list) else [v]):
            if not x > 0:
                raise ConfigError(f"{key}: thresholds must be positive, got {x}")
    if not cfg["tail"] <= 1:
        raise ConfigError(f"tail: must lie in (0, 1], got {cfg['tail']}")
    if cfg["subsequence"] not in ("all", "even", "odd"):
        raise ConfigError(f"subsequence: expected all, even or odd, got {cfg['subsequence']!r}")
    if "sequence" in cfg.values and cfg["sequence"] not in SEQUENCE_NAMES:
        raise ConfigError(f"sequence: unknown sequence '{cfg['sequence']}'")
    cfg.thresholds = {k: cfg.get(k) for k in THRESHOLD_KEYS if cfg.get(k) is not None}


# ---------------------------------------------------------------------------
# Building sequences

SEQUENCE_NAMES = ("toeplitz", "hankel", "block_flip", "arveson", "cuntz_difference", "alternating_diag",
                  "diag_geometric", "zero", "identity", "compact", "weighted_compact", "exf340")


def _symbol(cfg) -> FourierSymbol:
    raw = cfg["symbol"]
    try:
        return FourierSymbol.from_triples(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"symbol: expected a list of (k, re, im) triples, got {raw!r}") from exc


def _block(cfg) -> np.ndarray:
    try:
        B = np.array(cfg["block"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError("block: expected a nested list of numbers") from exc
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ConfigError(f"block: expected a square matrix, got shape {B.shape}")
    return B


def build_sequence(cfg: ExperimentConfig) -> matgen.MatrixSequence:
    name = cfg["sequence"]
    if name in ("toeplitz", "hankel"):
        return matgen.SEQUENCES[name](_symbol(cfg))
    if name == "diag_geometric":
        return matgen.geometric_diagonal_sequence(cfg["ratio"])
    if name == "cuntz_difference":
        return matgen.SEQUENCES[name](cfg.get("N", 2))
    if name == "compact":
        return matgen.compact_sequence(_block(cfg))
    if name == "weighted_compact":
        B = _block(cfg)
        return matgen.MatrixSequence(lambda n: matgen.weighted_compact(B, n), label="weighted_compact")
    if name == "exf340":
        N = cfg.get("N") or cfg["n_max"]
        if N > cfg.max_n:
            raise ConfigError(f"N: chain length {N} exceeds the cap max_n={cfg.max_n}")
        return matgen.exf340_sequence(N)
    return matgen.SEQUENCES[name]()


def _subsequence(cfg, sizes):
    sub = cfg["subsequence"]
    if sub == "even":
        return [n for n in sizes if n % 2 == 0]
    if sub == "odd":
        return [n for n in sizes if n % 2]
    return sizes


# ---------------------------------------------------------------------------
# Report writing

def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(float(x), ".17g")
    if isinstance(x, (list, tuple)):
        return " ".join(fmt(v) for v in x)
    if x is None:
        return ""
    return str(x)


class Reporter:
    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.out = cfg.out
        self.out.mkdir(parents=True, exist_ok=True)
        self.written: list[Path] = []

    def _write(self, name: str, header, rows):
        path = self.out / name
        with path.open("w", newline="", encoding="utf-8") as fh:
            fh.write(f"# experiment: {self.cfg.experiment}\n")
            for k in sorted(self.cfg.thresholds):
                fh.write(f"# threshold {k}: {fmt(self.cfg.thresholds[k])}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) for v in row])
        self.written.append(path)
        return path

    def profile(self, p: seqlab.SingularProfile):
        self._write("profile.csv", ("n", "k", "sigma_k"), p.rows())
        if self.cfg["dat"]:
            self._dat("sigma_min.dat", ((n, p.sv[n][0]) for n in p.sizes))
            self._dat("sigma_max.dat", ((n, p.sv[n][-1]) for n in p.sizes))

    def verdict(self, rows):
        self._write("verdict.csv", ("key", "value"), rows)

    def points(self, rows):
        self._write("points.csv", ("lambda", "epsilon", "n", "count", "class"), rows)

    def identity(self, rows):
        rows = list(rows)
        self._write("identity.csv", ("name", "n", "residual", "pass"), rows)
        if self.cfg["dat"]:
            self._dat("residual.dat", ((r[1], r[2]) for r in rows))

    def _dat(self, name, pairs):
        path = self.out / name
        with path.open("w", encoding="utf-8") as fh:
            for x, y in pairs:
                fh.write(f"{fmt(x)} {fmt(y)}\n")
        self.written.append(path)


def verdict_rows(prefix: str, v: seqlab.Verdict):
    yield f"{prefix}.classification", v.label
    if v.alpha is not None:
        yield f"{prefix}.alpha", v.alpha
    if v.ess_rank is not None:
        yield f"{prefix}.ess_rank", v.ess_rank
    if v.witness is not None:
        yield f"{prefix}.witness", list(v.witness)
    for k in sorted(v.thresholds):
        yield f"{prefix}.threshold.{k}", v.thresholds[k]
    for k in sorted(v.evidence):
        yield f"{prefix}.evidence.{k}", v.evidence[k]


def _expected(cfg) -> list[str]:
    raw = cfg.get("expect")
    return [] if not raw else [s.strip() for s in raw.split(",") if s.strip()]


def _check_labels(cfg, labels: list[str]) -> None:
    missing = [e for e in _expected(cfg) if e not in labels]
    if missing:
        raise Mismatch(f"expect: {', '.join(missing)} not among the verdicts {', '.join(labels)}")


# ---------------------------------------------------------------------------
# Experiments

def _classify_all(cfg, p, rows):
    labels = []
    for prefix, fn in (
        ("stability", lambda: seqlab.classify_stability(p, cfg["tau_stab"], cfg["tail"])),
        ("fredholm", lambda: seqlab.classify_fredholm(p, cfg["tau_zero"], cfg["tau_gap"], cfg["probe_depth"],
                                                      cfg["tail"])),
        ("compact", lambda: seqlab.classify_compact(p, cfg["tau_compact"], cfg["probe_depth"], cfg["tau_zero"],
                                                    cfg["tail"])),
    ):
        try:
            v = fn()
        except ValueError as exc:
            rows.append((f"{prefix}.classification", seqlab.INCONCLUSIVE))
            rows.append((f"{prefix}.reason", str(exc)))
            continue
        labels.append(v.label)
        rows.extend(verdict_rows(prefix, v))
    return labels


def run_analyze(cfg, rep: Reporter) -> None:
    seq = build_sequence(cfg)
    sizes = _subsequence(cfg, cfg.horizon())
    p = seqlab.profile(seq, sizes, cfg.max_n, cfg.threads)
    rep.profile(p)
    rows = [("sequence", seq.label), ("sizes", len(sizes))]
    labels = _classify_all(cfg, p, rows)
    try:
        spectra = seqlab.normal_spectra(seq, sizes, max_n=cfg.max_n)
    except FinsecError:
        spectra = None
    if spectra is not None:
        v = seqlab.classify_fractal_normal(spectra, cfg["eps"][0], cfg["tail"])
        labels.append(v.label)
        rows.extend(verdict_rows("fractal", v))
    rep.verdict(rows)
    _check_labels(cfg, labels)


def run_stabilize(cfg, rep: Reporter) -> None:
    seq = build_sequence(cfg)
    alpha = cfg["alpha"]
    if alpha < 0:
        raise ConfigError(f"alpha: must be nonnegative, got {alpha}")
    sizes = _subsequence(cfg, cfg.horizon())
    stab = seqlab.stabilize(seq, alpha)
    p = seqlab.profile(stab, sizes, cfg.max_n, cfg.threads)
    rep.profile(p)
    ranks = [int(np.linalg.matrix_rank(seqlab.stabilizing_perturbation(seq(n), alpha))) for n in sizes]
    rows = [("sequence", stab.label), ("alpha", alpha), ("max_perturbation_rank", max(ranks)),
            ("min_sigma_1", float(np.min(p.sigma(1))))]
    labels = _classify_all(cfg, p, rows)
    rep.verdict(rows)
    _check_labels(cfg, labels)


def run_restrict(cfg, rep: Reporter) -> None:
    seq = build_sequence(cfg)
    p = seqlab.profile(seq, cfg.horizon(), cfg.max_n, cfg.threads)
    rep.profile(p)
    kept = seqlab.extract_fractal_subsequence(p, cfg["probe_depth"], cfg.get("tol", 1e-6), cfg["tail"])
    parities = sorted({seqlab.parity_split(n) for n in kept})
    rows = [("sequence", seq.label), ("kept_sizes", kept), ("kept_count", len(kept)),
            ("parity_classes", ",".join(parities))]
    labels = []
    sub = p.restrict(kept)
    if len(sub) >= 20:
        labels = _classify_all(cfg, sub, rows)
    else:
        rows.append(("restricted.reason", f"only {len(sub)} sizes kept; classifiers need 20"))
    rep.verdict(rows)
    _check_labels(cfg, labels + [f"parity:{'+'.join(parities)}"])


def run_interlace(cfg, rep: Reporter) -> None:
    kind = cfg.get("chain", "exf340")
    N = cfg["N"]
    if N > cfg.max_n:
        raise ConfigError(f"N: chain length {N} exceeds the cap max_n={cfg.max_n}")
    if kind == "exf340":
        chain = matgen.exf340_tuples(N)
    elif kind == "random":
        chain = matgen.random_interlace_chain(N, cfg["bound"], np.random.default_rng(cfg["seed"]))
    else:
        raise ConfigError(f"chain: expected exf340 or random, got {kind!r}")
    tol = cfg.get("tol", 1e-8)
    seq = matgen.interlace_chain(chain)
    final = seq(N)
    rows = []
    for n in range(1, N + 1):
        err = float(np.max(np.abs(np.linalg.eigvalsh(final[:n, :n]) - chain.tuples[n - 1])))
        rows.append(("interlace_spectrum", n, err, err <= tol))
    rep.identity(rows)
    worst = max(r[2] for r in rows)
    rep.verdict([("chain", kind), ("N", N), ("max_eigenvalue_error", worst), ("tol", tol),
                 ("pass", worst <= tol)])
    if worst > tol:
        raise Mismatch(f"interlace: eigenvalue error {worst:.3g} exceeds tol {tol:.3g}")


def run_cuntz(cfg, rep: Reporter) -> None:
    N = cfg.get("N", 2)
    if N < 2:
        raise ConfigError(f"N: Cuntz arity must be >= 2, got {N}")
    n_max = cfg["n_max"]
    if n_max > cfg.max_n:
        raise ConfigError(f"n_max: {n_max} exceeds the cap max_n={cfg.max_n}")
    rows = []
    for n in range(cfg.get("n_min", 1), n_max + 1):
        rows.extend(identities.cuntz_relations_check(N, n).rows())
        for k in range(1, cfg["word_length"] + 1):
            for word in itertools.product(range(N), repeat=k):
                rows.extend(identities.cuntz_projection_check(N, word, n).rows())
        nonzero = identities.cuntz_difference_nonzero(N, n)
        rows.append((f"cuntz_difference(N={N})", n, float(nonzero), nonzero == (n % N == 1)))
    eta_rows = []
    p = 1
    while N ** p <= n_max:
        n = N ** p
        eta_rows.append((f"cuntz_difference_eta(N={N})", n, float(identities.cuntz_difference_nonzero(N, n)),
                         not identities.cuntz_difference_nonzero(N, n)))
        p += 1
    rows.extend(eta_rows)
    rep.identity(rows)
    failed = [r for r in rows if not r[3]]
    rep.verdict([("N", N), ("checks", len(rows)), ("failed", len(failed))])
    if failed:
        raise Mismatch(f"cuntz: {len(failed)} checks failed, first {failed[0][0]} at n={failed[0][1]}")


def run_widom(cfg, rep: Reporter) -> None:
    rng = np.random.default_rng(cfg["seed"])
    sizes = cfg.get("sizes")
    if sizes is None:
        sizes = cfg.horizon()
    sizes = check_horizon(list(sizes) if isinstance(sizes, (list, tuple)) else [sizes], cfg.max_n)
    rows = []
    for i in range(cfg["pairs"]):
        a, b = random_symbol(rng, cfg["degree"]), random_symbol(rng, cfg["degree"])
        for n in sizes:
            r = identities.widom_check(a, b, n)
            rows.append((f"widom[{i}]", n, r.max_residual, r.passed))
    rep.identity(rows)
    failed = [r for r in rows if not r[3]]
    rep.verdict([("pairs", cfg["pairs"]), ("degree", cfg["degree"]), ("seed", cfg["seed"]),
                 ("max_residual", max(r[2] for r in rows)), ("failed", len(failed))])
    if failed:
        raise Mismatch(f"widom: {len(failed)} residuals above bound")


def _point_rows(pc: seqlab.PointClass):
    for eps in sorted(pc.counts):
        for n in sorted(pc.counts[eps]):
            yield pc.lam, eps, n, pc.counts[eps][n], pc.cls


def run_arveson(cfg, rep: Reporter) -> None:
    sizes = cfg.horizon()
    eps = cfg.get("eps") if "eps" in cfg.values else [1e-8]
    spectra = seqlab.sym_spectra(matgen.SEQUENCES["arveson"](), sizes, cfg.max_n)
    counts = {n: count_in_interval(spectra[n], -eps[0], eps[0], snap=0.0) for n in sizes}
    series = [counts[n] for n in sizes]
    nondecreasing = all(x <= y for x, y in zip(series, series[1:]))
    doubles = series[-1] >= 2 * series[0] > 0
    cls = seqlab.ESSENTIAL if nondecreasing and doubles else seqlab.INCONCLUSIVE
    rep.points((0.0, eps[0], n, counts[n], cls) for n in sizes)
    rep.verdict([("lambda", 0.0), ("epsilon", eps[0]), ("nondecreasing", nondecreasing),
                 ("at_least_doubles", doubles), ("class", cls)])
    if not (nondecreasing and doubles):
        raise Mismatch("arveson: zero-eigenvalue counts are not nondecreasing and doubling")


def _lambda_grid(cfg) -> list[float]:
    if "lambda" in cfg.values:
        return cfg["lambda"]
    count = cfg["lambda_count"]
    if count < 1:
        raise ConfigError(f"lambda_count: must be positive, got {count}")
    return [float(x) for x in np.linspace(cfg["lambda_min"], cfg["lambda_max"], count)]


def run_essential_scan(cfg, rep: Reporter) -> None:
    seq = build_sequence(cfg)
    sizes = cfg.horizon()
    spectra = seqlab.sym_spectra(seq, sizes, cfg.max_n)
    report = seqlab.dichotomy_scan(None, _lambda_grid(cfg), cfg["eps"], spectra=spectra,
                                   growth_min=cfg["growth_min"], tail=cfg["tail"])
    rep.points(itertools.chain.from_iterable(_point_rows(pc) for pc in report.points))
    rows = [("sequence", seq.label), ("dichotomy_holds", report.holds), ("violations", len(report.violations))]
    for pc in report.points:
        rows.append((f"class[{fmt(pc.lam)}]", pc.cls))
        for g in sorted(pc.witnesses):
            rows.append((f"witness[{fmt(pc.lam)}].{g}", pc.witnesses[g]))
    rep.verdict(rows)
    problems = []
    for item in _expected(cfg):
        if item == "dichotomy":
            if not report.holds:
                problems.append(f"dichotomy fails at {len(report.violations)} points")
            continue
        lam_text, _, want = item.partition(":")
        try:
            lam = float(lam_text)
        except ValueError as exc:
            raise ConfigError(f"expect: bad item {item!r}, use 'dichotomy' or 'lam:Class'") from exc
        got = [pc.cls for pc in report.points if abs(pc.lam - lam) < 1e-12]
        if not got:
            raise ConfigError(f"expect: lambda {lam} is not on the scan grid")
        if got[0] != want:
            problems.append(f"lambda={lam}: expected {want}, got {got[0]}")
    if problems:
        raise Mismatch("; ".join(problems))


def run_alpha_parity(cfg, rep: Reporter) -> None:
    rep_ = seqlab.alpha_parity_check(_block(cfg), cfg.horizon(), cfg["tau_zero"], cfg["tail"], cfg.max_n)
    rows = [("kernel_dim", rep_.kernel_dim), ("odd_counts", list(rep_.odd_counts)),
            ("even_counts", list(rep_.even_counts)), ("pass", rep_.passed)]
    rows.extend((f"count[{n}]", c) for n, c in sorted(rep_.counts.items()))
    rep.verdict(rows)
    if not rep_.passed:
        raise Mismatch(f"alpha-parity: odd counts {rep_.odd_counts}, even counts {rep_.even_counts}, "
                       f"kernel dimension {rep_.kernel_dim}")


RUNNERS = {
    "analyze": run_analyze, "interlace": run_interlace, "cuntz": run_cuntz, "widom": run_widom,
    "arveson": run_arveson, "essential-scan": run_essential_scan, "restrict": run_restrict,
    "stabilize": run_stabilize, "alpha-parity": run_alpha_parity,
}


def run(cfg: ExperimentConfig) -> int:
    """Run one experiment, write its reports and return the exit code."""
    try:
        RUNNERS[cfg.experiment](cfg, Reporter(cfg))
    except ConfigError as exc:
        log.error("invalid config: %s", exc)
        return EXIT_CONFIG
    except Mismatch as exc:
        log.error("mismatch: %s", exc)
        return EXIT_MISMATCH
    except (NumericalBreakdown, NegativeSquare, SpectrumMismatch, np.linalg.LinAlgError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    except FinsecError as exc:
        # remaining library errors stem from config values (bad symbol, non-interlacing chain, ...)
        log.error("invalid config: %s", exc)
        return EXIT_CONFIG
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="finsec", description="Run a finite-section experiment from a config file.")
    parser.add_argument("config", type=Path, help="flat key = value experiment file")
    parser.add_argument("--out", type=Path, default=None, help="output directory (default: config 'out' or '.')")
    parser.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="largest matrix size allowed")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for per-n work")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="finsec: %(message)s")

    if args.max_n < 1 or args.threads < 1:
        log.error("invalid config: --max-n and --threads must be positive")
        return EXIT_CONFIG
    try:
        text = args.config.read_text(encoding="utf-8")
    except OSError as exc:
        log.error("invalid config: cannot read %s: %s", args.config, exc)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text, str(args.config))
    except ConfigError as exc:
        log.error("invalid config: %s", exc)
        return EXIT_CONFIG
    cfg.max_n, cfg.threads = args.max_n, args.threads
    cfg.out = args.out or Path(cfg.values.get("out", "."))
    code = run(cfg)
    if code == EXIT_OK:
        log.info("%s: ok, reports in %s", cfg.experiment, cfg.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
