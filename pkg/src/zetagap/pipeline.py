"""Scan, verify and report drivers behind the command line.

The driver owns all parallelism: height windows of length 25 go to a
process pool, results come back in window order and a single writer puts
them on disk.  Every output is a deterministic function of the resolved
configuration.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import counting, specfun, theoremlab
from .config import ScanConfig, dump_config
from .errors import InsufficientCoverageError, PathThroughZeroError, ZetaGapError
from .specfun import Accuracy
from .zerofinder import (CertifiedZeros, ZetaPrimeZero, ZetaZero, critical_window_edges,
                         locate_critical_zeros, locate_zeta_prime_zeros)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_COMPLETENESS = 2
EXIT_IO = 3
EXIT_USAGE = 64
EXIT_DATA = 65

PAIR_MARGIN = 10.0
ZERO_FIELDS = ("gamma", "bracket_width", "z_residual")
ZPRIME_FIELDS = ("beta_prime", "gamma_prime", "residual")
PAIR_FIELDS = tuple(f.name for f in dataclasses.fields(theoremlab.PairRecord))
RATIO_FIELDS = ("gamma_prime", "a", "delta", "ratio_thm", "ratio_gy", "ratio_fgh")
WINDOW_CS = (0.5, 1.0, 2.16)


class DataFormatError(ZetaGapError):
    pass


# ------------------------------------------------------------------- output


def fmt(x) -> str:
    """Shortest round-trip decimal for floats, 0/1 for flags."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def render_json_rows(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    data = [dict(zip(header, (_jsonable(v) for v in row))) for row in rows]
    return json.dumps(data, indent=1, allow_nan=False) + "\n"


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def write_outputs(out: Path, files: dict[str, str]) -> None:
    """Write every file or none: temp names first, renamed once all succeed."""
    out.mkdir(parents=True, exist_ok=True)
    tmp = []
    try:
        for name, text in files.items():
            p = out / (name + ".partial")
            p.write_text(text, encoding="utf-8", newline="\n")
            tmp.append((p, out / name))
        for p, final in tmp:
            os.replace(p, final)
    except OSError:
        for p, _ in tmp:
            p.unlink(missing_ok=True)
        raise


# --------------------------------------------------------------------- scan


@dataclass
class ScanResult:
    zeros: CertifiedZeros
    zeta_prime_zeros: list[ZetaPrimeZero]
    pairs: list[theoremlab.PairRecord]


def _map(fn: Callable, tasks: list, threads: int) -> list:
    if threads <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, *zip(*tasks)))


def critical_zeros(t_lo: float, t_hi: float, abs_tol: float, threads: int = 1) -> CertifiedZeros:
    """Critical-line zeros on ``(t_lo, t_hi]`` computed window by window."""
    edges = critical_window_edges(t_lo, t_hi)
    tasks = [(a, b, abs_tol) for a, b in zip(edges[:-1], edges[1:])]
    parts = _map(_zeros_task, tasks, threads)
    return CertifiedZeros([z for part in parts for z in part], t_lo, t_hi)


def _zeros_task(a, b, abs_tol):
    return list(locate_critical_zeros(a, b, Accuracy(abs_tol)))


def _zprime_task(a, b, sigma_max, abs_tol):
    return locate_zeta_prime_zeros(a, b, sigma_max, Accuracy(abs_tol))


def zeta_prime_zeros(t_lo: float, t_hi: float, sigma_max: float, abs_tol: float,
                     threads: int = 1) -> list[ZetaPrimeZero]:
    edges = critical_window_edges(t_lo, t_hi)
    tasks = [(a, b, sigma_max, abs_tol) for a, b in zip(edges[:-1], edges[1:])]
    found = [z for part in _map(_zprime_task, tasks, threads) for z in part]
    found.sort(key=lambda z: (z.gamma_prime, z.beta_prime))
    # a zero on a shared window edge can be reported by both windows
    out: list[ZetaPrimeZero] = []
    for z in found:
        if out and abs(complex(z.beta_prime, z.gamma_prime)
                       - complex(out[-1].beta_prime, out[-1].gamma_prime)) < 1e-8:
            if z.residual < out[-1].residual:
                out[-1] = z
            continue
        out.append(z)
    return out


def compute_scan(cfg: ScanConfig) -> ScanResult:
    lo = max(14.0, cfg.t_min - PAIR_MARGIN)
    hi = min(1e4, cfg.t_max + PAIR_MARGIN)
    zeros = critical_zeros(lo, hi, cfg.abs_tol, cfg.threads)
    zp = zeta_prime_zeros(cfg.t_min, cfg.t_max, cfg.sigma_max, cfg.abs_tol, cfg.threads)
    pairs = [theoremlab.pair_nearest(z, zeros) for z in zp]
    return ScanResult(zeros, zp, pairs)


def scan_files(cfg: ScanConfig, result: ScanResult) -> dict[str, str]:
    render = render_csv if cfg.output_format == "csv" else render_json_rows
    ext = cfg.output_format
    rows_z = [[getattr(z, f) for f in ZERO_FIELDS] for z in result.zeros]
    rows_p = [[getattr(z, f) for f in ZPRIME_FIELDS] for z in result.zeta_prime_zeros]
    rows_pair = [[getattr(p, f) for f in PAIR_FIELDS] for p in result.pairs]
    return {
        f"zeros.{ext}": render(ZERO_FIELDS, rows_z),
        f"zeta_prime_zeros.{ext}": render(ZPRIME_FIELDS, rows_p),
        f"pairs.{ext}": render(PAIR_FIELDS, rows_pair),
        "run_config.txt": dump_config(cfg),
    }


def run_scan(cfg: ScanConfig) -> int:
    try:
        result = compute_scan(cfg)
    except ZetaGapError as exc:
        print(f"scan failed: {type(exc).__name__}: {exc}")
        return EXIT_COMPLETENESS
    try:
        write_outputs(Path(cfg.out), scan_files(cfg, result))
    except OSError as exc:
        print(f"scan failed writing output: {exc}")
        return EXIT_IO
    print(f"{len(result.zeros)} zeros, {len(result.zeta_prime_zeros)} zeta' zeros, "
          f"{len(result.pairs)} pairs -> {cfg.out}")
    return EXIT_OK


# ------------------------------------------------------------------- verify


SUITES = ("lemma1", "lemma2", "lemma3", "kernels", "counting", "constants")
COUNTING_HEIGHTS = (50.0, 100.0, 250.0, 500.0, 1000.0)


def _check(name: str, value, bound, passed: bool) -> dict:
    return {"name": name, "value": _jsonable(value), "bound": _jsonable(bound), "pass": bool(passed)}


def verify_constants(cfg: ScanConfig) -> list[dict]:
    sol = theoremlab.solve_c0(0.25, 0.0)
    return [
        _check("c0", sol.c0, [0.46, 0.47], 0.46 < sol.c0 < 0.47),
        _check("implied_constant", sol.implied_constant, [2.15, 2.17],
               abs(sol.implied_constant - theoremlab.IMPLIED_CONSTANT_REF) <= 0.01),
        _check("c0_residual", sol.residual, 1e-12, sol.residual <= 1e-12),
    ]


def random_kernels(rng: np.random.Generator, n: int) -> list[tuple[theoremlab.PoissonKernel, float]]:
    """Random ``(kernel, p)`` with ``a`` log-uniform in [1e-4, 0.5]."""
    out = []
    for _ in range(n):
        a = float(10 ** rng.uniform(-4, math.log10(0.5)))
        center = float(rng.uniform(20, 5000))
        p = float(10 ** rng.uniform(-1, 2))
        out.append((theoremlab.PoissonKernel(a, center), p))
    return out


def verify_kernels(cfg: ScanConfig, n: int = 100) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    worst = {f: 0.0 for f in ("full_mass", "central_mass", "total_variation",
                              "window_variation", "window_integral")}
    for k, p in random_kernels(rng, n):
        closed = theoremlab.kernel_closed_forms(k, p)
        quad = theoremlab.kernel_quadrature(k, p)
        for f in ("full_mass", "central_mass", "total_variation", "window_variation"):
            c, q = getattr(closed, f), getattr(quad, f)
            worst[f] = max(worst[f], abs(c - q) / max(1.0, abs(c)))
        g = theoremlab.window_integral_closed_form(p * math.sqrt(k.a))
        worst["window_integral"] = max(
            worst["window_integral"], abs(g - theoremlab.window_integral_quadrature(k.a, p)))
    checks = [_check(f"{f}_vs_quadrature", v, 1e-10, v <= 1e-10) for f, v in worst.items()]
    fm = theoremlab.kernel_closed_forms(theoremlab.PoissonKernel(0.01, 100.0), 1.0).full_mass
    checks.append(_check("full_mass_is_pi", abs(fm - math.pi), 1e-12, abs(fm - math.pi) <= 1e-12))
    return checks


def verify_lemma2(cfg: ScanConfig) -> list[dict]:
    bound = cfg.verify_bounds.density_max
    grid = np.linspace(20.0, 2000.0, 200)
    worst = max(abs(counting.density_residual(float(u), 0.1)) for u in grid)
    fd = counting.density_residual(200.0, 1e-6)
    lim = counting.density_residual_limit(200.0)
    return [
        _check("density_residual_max", worst, bound, worst <= bound),
        _check("density_fd_vs_analytic_u200", abs(fd - lim), 1e-6, abs(fd - lim) <= 1e-6),
    ]


def random_admissible_pairs(rng: np.random.Generator, n: int, lo: float = 100.0,
                            hi: float = 2000.0) -> list[tuple[float, float]]:
    out = []
    while len(out) < n:
        t1 = float(rng.uniform(lo, hi))
        t2 = float(rng.uniform(t1, min(2 * t1, hi)))
        if t1 < t2 < 2 * t1:
            out.append((t1, t2))
    return out


def verify_lemma3(cfg: ScanConfig, n: int = 500) -> list[dict]:
    bound = cfg.verify_bounds.lipschitz_max
    rng = np.random.default_rng(cfg.seed)
    worst = max(counting.lipschitz_ratio(a, b) for a, b in random_admissible_pairs(rng, n))
    return [_check("lipschitz_ratio_max", worst, bound, worst <= bound)]


def verify_counting(cfg: ScanConfig, heights: Sequence[float] = COUNTING_HEIGHTS,
                    zeros: CertifiedZeros | None = None, n_samples: int = 2000) -> list[dict]:
    acc = Accuracy(cfg.abs_tol)
    top = max(heights)
    if zeros is None:
        zeros = critical_zeros(14.0, top, cfg.abs_tol, cfg.threads)
    g = zeros.gammas
    checks = []
    for T in heights:
        cv = counting.n_of_t(T, acc)
        found = int(np.count_nonzero(g <= T))
        checks.append(_check(f"N({T:g})", cv.N, found, cv.N == found))
        checks.append(_check(f"consistency_residual({T:g})", abs(cv.consistency_residual), 1e-8,
                             abs(cv.consistency_residual) < 1e-8))
    rng = np.random.default_rng(cfg.seed)
    samples = []
    for T in rng.uniform(100.0, min(1000.0, top), n_samples):
        try:
            samples.append(counting.s_of_t(float(T), acc))
        except PathThroughZeroError:
            continue
    s_max = float(np.max(np.abs(samples)))
    s_mean = float(np.mean(samples))
    b = cfg.verify_bounds
    checks.append(_check("S_abs_max", s_max, b.s_abs_max, s_max <= b.s_abs_max))
    checks.append(_check("S_mean", abs(s_mean), b.s_mean_max, abs(s_mean) <= b.s_mean_max))
    return checks


def lemma1_rows(zp: Sequence[ZetaPrimeZero], zeros: CertifiedZeros):
    """Per zeta' zero: kernel sum, tail estimate, residual, and the exact value.

    The exact value comes from the Hadamard product: at a zero of zeta',
    ``Re zeta'/zeta = 0`` gives
    ``sum_gamma h(gamma) = Re psi(s/2 + 1)/2 - log(pi)/2 + Re 1/(s - 1)``.
    """
    rows = []
    for z in zp:
        k = theoremlab.PoissonKernel.from_zero(z)
        res = theoremlab.lemma1_sum(k, zeros)
        s = complex(z.beta_prime, z.gamma_prime)
        psi = specfun.digamma(s / 2 + 1).value
        exact = 0.5 * psi.real - 0.5 * math.log(math.pi) + (1 / (s - 1)).real
        rows.append((z, res, exact))
    return rows


def verify_lemma1(cfg: ScanConfig, zeros: CertifiedZeros | None = None,
                  zp: Sequence[ZetaPrimeZero] | None = None) -> list[dict]:
    t_lo, t_hi = max(cfg.t_min, 14.0), cfg.t_max
    if 10 * t_hi > 1e4:
        raise ValueError("lemma1 needs zeros up to 10 * t_max <= 1e4")
    if zeros is None:
        zeros = critical_zeros(14.0, 10 * t_hi, cfg.abs_tol, cfg.threads)
    if zp is None:
        zp = zeta_prime_zeros(t_lo, t_hi, cfg.sigma_max, cfg.abs_tol, cfg.threads)
    b = cfg.verify_bounds
    rows = lemma1_rows(zp, zeros)
    if not rows:
        return [_check("lemma1_nonempty", 0, 1, False)]
    res_max = max(abs(r.residual) for _, r, _ in rows)
    tail_max = max(r.tail_bound for _, r, _ in rows)
    # the truncated sum misses exactly the tail; allow the estimate a factor 2
    ident = max(abs(ex - r.sum) - 2 * r.tail_bound for _, r, ex in rows)
    return [
        _check("lemma1_zeros", len(rows), None, True),
        _check("lemma1_residual_max", res_max, b.lemma1_residual_max, res_max <= b.lemma1_residual_max),
        _check("lemma1_tail_bound_max", tail_max, b.lemma1_tail_max, tail_max <= b.lemma1_tail_max),
        _check("lemma1_hadamard_excess", ident, 1e-8, ident <= 1e-8),
    ]


def run_verify(cfg: ScanConfig, suite: str) -> int:
    suites = SUITES if suite == "all" else (suite,)
    if suite != "all" and suite not in SUITES:
        print(f"unknown suite {suite!r}")
        return EXIT_USAGE
    fns = {"lemma1": verify_lemma1, "lemma2": verify_lemma2, "lemma3": verify_lemma3,
           "kernels": verify_kernels, "counting": verify_counting, "constants": verify_constants}
    checks = []
    try:
        for name in suites:
            for c in fns[name](cfg):
                c["suite"] = name
                checks.append(c)
    except ValueError as exc:
        print(f"verify: {exc}")
        return EXIT_USAGE
    except ZetaGapError as exc:
        print(f"verify failed: {type(exc).__name__}: {exc}")
        return EXIT_COMPLETENESS
    passed = all(c["pass"] for c in checks)
    report = {"suite": suite, "pass": passed, "checks": checks}
    for c in checks:
        print(f"{'PASS' if c['pass'] else 'FAIL'}  {c['suite']:<9} {c['name']}: {c['value']} (bound {c['bound']})")
    try:
        write_outputs(Path(cfg.out), {
            f"verify_{suite}.json": json.dumps(report, indent=1, allow_nan=False) + "\n",
            "run_config.txt": dump_config(cfg),
        })
    except OSError as exc:
        print(f"verify failed writing output: {exc}")
        return EXIT_IO
    return EXIT_OK if passed else EXIT_VERIFY


# ------------------------------------------------------------------- report


def _read_table(path: Path, fields: Sequence[str]) -> list[dict]:
    if path.suffix == ".json":
        data = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(data, list) or any(set(r) != set(fields) for r in data):
            raise DataFormatError(f"{path.name}: schema mismatch")
        return data
    with path.open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != tuple(fields):
        raise DataFormatError(f"{path.name}: header {rows[0] if rows else []} != {list(fields)}")
    out = []
    for r in rows[1:]:
        if len(r) != len(fields):
            raise DataFormatError(f"{path.name}: row of {len(r)} fields")
        out.append(dict(zip(fields, r)))
    return out


def _find(scan_dir: Path, stem: str) -> Path:
    for ext in ("csv", "json"):
        p = scan_dir / f"{stem}.{ext}"
        if p.exists():
            return p
    raise DataFormatError(f"{stem}.csv missing from {scan_dir}")


def _stat(values: list[float]) -> dict:
    if not values:
        return {"max": None, "mean": None}
    return {"max": max(values), "mean": math.fsum(values) / len(values)}


def load_scan(scan_dir: Path) -> tuple[list[ZetaZero], list[theoremlab.PairRecord]]:
    try:
        zrows = _read_table(_find(scan_dir, "zeros"), ZERO_FIELDS)
        prows = _read_table(_find(scan_dir, "pairs"), PAIR_FIELDS)
        zeros = [ZetaZero(float(r["gamma"]), float(r["bracket_width"]), float(r["z_residual"]))
                 for r in zrows]
        types = {f.name: f.type for f in dataclasses.fields(theoremlab.PairRecord)}
        pairs = []
        for r in prows:
            kw = {}
            for name, value in r.items():
                if types[name] in (bool, "bool"):
                    kw[name] = value in ("1", True, "true")
                else:
                    kw[name] = float(value)
            pairs.append(theoremlab.PairRecord(**kw))
    except (ValueError, KeyError, TypeError) as exc:
        raise DataFormatError(str(exc)) from exc
    return zeros, pairs


def summarize(zeros: list[ZetaZero], pairs: list[theoremlab.PairRecord]) -> tuple[dict, list]:
    live = [p for p in pairs if not p.degenerate]
    gaps = [theoremlab.normalized_gaps(p) for p in live]
    in_range = [p for p in live if p.theorem_range]
    thm_in = [theoremlab.normalized_gaps(p).ratio_thm for p in in_range]
    hist = {}
    for C in WINDOW_CS:
        counts: dict[str, int] = {}
        for p in live:
            zp = ZetaPrimeZero(p.beta_prime, p.gamma_prime, 0.0)
            try:
                n = str(theoremlab.window_zero_count(zp, C, zeros))
            except InsufficientCoverageError:
                n = "uncovered"
            counts[n] = counts.get(n, 0) + 1
        hist[repr(C)] = dict(sorted(counts.items()))
    summary = {
        "n_pairs": len(pairs),
        "n_nondegenerate": len(live),
        "n_theorem_range": len(in_range),
        "fraction_theorem_range": len(in_range) / len(live) if live else 0.0,
        "ratio_thm": _stat([g.ratio_thm for g in gaps]),
        "ratio_thm_theorem_range": _stat(thm_in),
        "ratio_gy": _stat([g.ratio_gy for g in gaps]),
        "ratio_fgh": _stat([g.ratio_fgh for g in gaps]),
        "trivial_ratio": _stat([g.trivial_ratio for g in gaps]),
        "asymptotic_constant_reference": theoremlab.IMPLIED_CONSTANT_REF,
        "window_zero_count_histogram": hist,
    }
    ratios = [(p.gamma_prime, p.a, p.delta, p.ratio_thm, p.ratio_gy, p.ratio_fgh) for p in pairs]
    return summary, ratios


def run_report(scan_dir: str) -> int:
    d = Path(scan_dir)
    try:
        zeros, pairs = load_scan(d)
    except DataFormatError as exc:
        print(f"report: {exc}")
        return EXIT_DATA
    except OSError as exc:
        print(f"report: {exc}")
        return EXIT_IO
    summary, ratios = summarize(zeros, pairs)
    try:
        write_outputs(d, {
            "summary.json": json.dumps(summary, indent=1, sort_keys=True, allow_nan=False) + "\n",
            "ratios.csv": render_csv(RATIO_FIELDS, ratios),
        })
    except OSError as exc:
        print(f"report failed writing output: {exc}")
        return EXIT_IO
    print(json.dumps(summary, indent=1, sort_keys=True))
    return EXIT_OK
