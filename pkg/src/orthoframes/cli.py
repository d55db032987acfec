"""``orthoframes`` command line.

Every library failure maps to its own exit code (see ``orthoframes --help``).
"""

import argparse
import logging
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .config import TARGETS, RunConfig, parse_seed, parse_tolerance
from .errors import EXIT_CODES, EXIT_REPRODUCTION_FAILED, ConfigError, OrthoFramesError
from .kqrep import (KQBox, completeness_probe, criterion_target, kq_overlaps,
                    kq_transform, orthonormality_criterion)
from .overlaps import OverlapSequence, gabor_overlaps, translate_overlaps
from .report import plot_rows, write_csv, write_json
from .reproduce import run_reproduce
from .seedfn import GaussianVacuum, UniformGrid
from .symbol import build_symbol, check_positive, coefficients, parseval_sum
from .synth import GramReport, gram_truncated, synthesize
from .translates import (TranslateSum, frame_bounds, mra_orthonormalize,
                         periodized_spectrum, sampled_translate_gram,
                         translate_gram)

log = logging.getLogger("orthoframes")
log.addHandler(logging.NullHandler())
log.propagate = False

#: seed used when neither --seed nor --config is given
COMMAND_SEEDS = {
    "orthonormalize": "rect:0,3a/4",
    "frame-bounds": "rect:0.75,0.75,1",
    "mra-compare": "rect:0.75,0.75,1",
    "kq-check": "rect:a/2,a/2",
}

PSI_SAMPLES = 2001


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _summary(cfg, results, passed):
    return {"config": cfg.as_dict(), "results": results, "pass": bool(passed),
            "versions": {"spec": "1"}}


def _symbol_info(sym):
    return {"min": sym.min_value, "max": sym.max_value,
            "argmin": list(sym.argmin), "max_imag": sym.max_imag,
            "scan_resolution": sym.grid_resolution}


def _as_2d(ov):
    if ov.dims == 2:
        return ov
    n = 2 * ov.radius + 1
    vals = np.zeros((n, n), dtype=complex)
    vals[ov.radius] = ov.values
    return OverlapSequence(2, ov.radius, vals, ov.tail_bound, ov.source)


def run_orthonormalize(cfg, out):
    lattice = cfg.lattice
    seed = parse_seed(cfg.seed, lattice)
    if cfg.step is not None:
        ov = translate_overlaps(seed, cfg.step, cfg.overlap_radius, cfg.tol("quad"))
    else:
        ov = gabor_overlaps(seed, lattice, cfg.overlap_radius, cfg.tol("quad"))
    sym = build_symbol(ov)
    floor = cfg.tol("floor") * max(sym.max_value, 0.0)
    check_positive(sym, floor)
    table = coefficients(sym, cfg.coeff_radius, floor=floor, tol=cfg.tol("coeff"))
    N = cfg.N
    if cfg.step is not None:
        psi = TranslateSum(seed, cfg.step, table.c, N)
        n1s = (0,)
    else:
        psi = synthesize(seed, lattice, table, N)
        n1s = range(-2, 3)
    ov2 = _as_2d(ov)
    idx = [(n1, n2) for n1 in n1s for n2 in range(-(2 * N + 2), 2 * N + 3)]
    gram = GramReport({n: gram_truncated(table, ov2, n[0], n[1], N) for n in idx},
                      "symbol_algebra")
    lo, hi = psi.support
    grid = UniformGrid.spanning(lo, hi, PSI_SAMPLES)
    write_csv(os.path.join(out, "coefficients.csv"), table.csv_header(), table.csv_rows())
    write_csv(os.path.join(out, "psi.csv"), ["x", "psi_re", "psi_im"],
              plot_rows(grid.points, psi(grid.points)))
    gj = gram.to_json()
    gj.update({"N": N, "truncation": "outer index |k| <= N"})
    write_json(os.path.join(out, "gram.json"), gj)
    lhs, rhs = parseval_sum(table, sym)
    results = {
        "mode": "translates" if cfg.step is not None else "gabor",
        "seed": getattr(seed, "label", cfg.seed),
        "symbol": _symbol_info(sym),
        "table": {"radius": table.radius, "resolution": table.resolution,
                  "decay_certificate": table.decay_certificate},
        "sum_rule": table.sum_rule().real,
        "parseval": {"sum_c2": lhs, "mean_inverse_symbol": rhs},
        "norm_sq": gram.norm_sq,
        "max_offdiag": gram.max_offdiag,
        "argmax_offdiag": list(gram.argmax_offdiag) if gram.argmax_offdiag else None,
    }
    tol = cfg.tol("gram")
    passed = abs(gram.norm_sq - 1) <= tol and gram.max_offdiag <= tol
    write_json(os.path.join(out, "summary.json"), _summary(cfg, results, passed))
    print(f"norm_sq = {gram.norm_sq:.10g}  max_offdiag = {gram.max_offdiag:.6g}"
          f"  at n = {gram.argmax_offdiag}")
    print(f"symbol range [{sym.min_value:.6g}, {sym.max_value:.6g}];"
          f" sum rule {table.sum_rule().real:.12g}")
    return 0


def run_reproduce_cmd(cfg, out):
    rep = run_reproduce(cfg.target)
    print(f"reproduce {cfg.target}")
    print(rep.format())
    write_json(os.path.join(out, f"reproduce_{cfg.target}.json"), rep.to_json())
    write_json(os.path.join(out, "summary.json"),
               _summary(cfg, rep.to_json(), rep.passed))
    failed = [r.name for r in rep.rows if not r.passed]
    if failed:
        print(f"{len(failed)} row(s) outside tolerance: {', '.join(failed)}")
        return EXIT_REPRODUCTION_FAILED
    print("all rows within tolerance")
    return 0


def run_frame_bounds(cfg, out):
    if cfg.step not in (None, 1.0):
        raise ConfigError("step: frame-bounds analyses integer translates (step 1)")
    seed = parse_seed(cfg.seed, cfg.lattice)
    spec = periodized_spectrum(seed, cfg.grid)
    fb = frame_bounds(spec)
    write_csv(os.path.join(out, "spectrum.csv"), ["x", "psi_re", "psi_im"],
              plot_rows(spec.p, spec.values))
    results = {"seed": spec.seed_label, "A_bound": fb.A_bound, "B_bound": fb.B_bound,
               "is_frame": fb.is_frame, "excluded_measure": fb.excluded_measure,
               "resolution": cfg.grid}
    write_json(os.path.join(out, "bounds.json"), results)
    write_json(os.path.join(out, "summary.json"), _summary(cfg, results, fb.is_frame))
    print(f"A = {fb.A_bound:.12g}  B = {fb.B_bound:.12g}  frame: {fb.is_frame}"
          f"  (excluded measure {fb.excluded_measure:.3g})")
    return 0


def run_kq_check(cfg, out):
    lattice = cfg.lattice
    seed = parse_seed(cfg.seed, lattice)
    box = KQBox.for_lattice(lattice, cfg.grid, cfg.grid)
    rep = kq_transform(seed, box)
    criterion = orthonormality_criterion(rep, cfg.L)
    parseval = abs(rep.norm_sq() - seed.norm_sq(cfg.tol("quad")))
    radius = 2
    x_ov = gabor_overlaps(seed, lattice, radius, cfg.tol("quad"))
    kq_ov = kq_overlaps(rep, radius)
    eq_err = float(np.abs(x_ov.values - kq_ov.values).max())
    results = {"seed": rep.seed_label, "L": cfg.L, "grid": cfg.grid,
               "criterion_residual": criterion,
               "criterion_target": criterion_target(box, cfg.L),
               "orthonormal": criterion < 1e-10,
               "parseval_residual": parseval,
               "overlap_agreement": eq_err}
    if cfg.probe:
        res, h_norm = completeness_probe(rep, GaussianVacuum(), cfg.L)
        results["probe"] = {"residual": res, "h_norm": h_norm,
                            "incomplete": res < 1e-6 and h_norm > 0.1}
    rep_summary = rep.summary()
    results["kq"] = rep_summary
    write_json(os.path.join(out, "kq.json"), results)
    passed = parseval <= 1e-6 and eq_err <= 1e-6
    write_json(os.path.join(out, "summary.json"), _summary(cfg, results, passed))
    print(f"criterion residual {criterion:.3e} (target {results['criterion_target']:.6g})"
          f"  parseval residual {parseval:.3e}  overlap agreement {eq_err:.3e}")
    if cfg.probe:
        p = results["probe"]
        print(f"probe residual {p['residual']:.3e}  ||h|| = {p['h_norm']:.6g}")
    return 0


def run_mra_compare(cfg, out):
    seed = parse_seed(cfg.seed, cfg.lattice)
    phi = mra_orthonormalize(seed)
    _, psi = _translate_generator(seed, cfg)
    x = phi.grid.points
    x = x[np.abs(x) <= 10]
    diff = float(np.abs(phi(x) - psi(x)).max())
    ns = range(-3, 4)
    mra_gram = {n: sampled_translate_gram(phi, n) for n in ns}
    psi_gram = {n: translate_gram(psi, n, cfg.tol("quad")) for n in ns}
    dev = lambda g: max(abs(v - (1 if n == 0 else 0)) for n, v in g.items())
    write_csv(os.path.join(out, "phi_mra.csv"), ["x", "psi_re", "psi_im"],
              plot_rows(x, phi(x)))
    write_csv(os.path.join(out, "psi.csv"), ["x", "psi_re", "psi_im"],
              plot_rows(x, psi(x)))
    results = {"seed": getattr(seed, "label", cfg.seed),
               "max_difference": diff,
               "mra_gram_deviation": dev(mra_gram),
               "psi_gram_deviation": dev(psi_gram),
               "generators_agree": diff <= 1e-8}
    passed = results["mra_gram_deviation"] <= 1e-6 and results["psi_gram_deviation"] <= 1e-6
    write_json(os.path.join(out, "summary.json"), _summary(cfg, results, passed))
    print(f"max |phi_mra - psi| = {diff:.3e}; Gram deviations "
          f"{results['mra_gram_deviation']:.3e} (MRA), {results['psi_gram_deviation']:.3e}"
          " (coefficient expansion)")
    return 0


def _translate_generator(seed, cfg):
    ov = translate_overlaps(seed, 1.0, max(1, math.ceil(seed.support[1] - seed.support[0])))
    table = coefficients(build_symbol(ov), cfg.coeff_radius)
    return table, TranslateSum(seed, 1.0, table.c, cfg.coeff_radius)


RUNNERS = {
    "orthonormalize": run_orthonormalize,
    "reproduce": run_reproduce_cmd,
    "frame-bounds": run_frame_bounds,
    "kq-check": run_kq_check,
    "mra-compare": run_mra_compare,
}


def build_parser():
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    g = common.add_argument_group("global options")
    g.add_argument("--out", metavar="DIR", help="output directory (default: out)")
    g.add_argument("--tol", metavar="NAME=VAL", action="append",
                   help="override a tolerance (quad, coeff, floor, gram)")
    g.add_argument("--grid", type=int, metavar="N",
                   help="grid size ((k,q) box per axis, spectrum points)")
    g.add_argument("--radius", type=int, metavar="N", help="overlap truncation radius")
    g.add_argument("--coeff-radius", type=int, metavar="N",
                   help="coefficient table radius")
    g.add_argument("--N", type=int, metavar="N", help="synthesis truncation")
    g.add_argument("--L", type=int, metavar="N", help="lattice parameter (a**2 = 2 pi L)")
    g.add_argument("--A", type=float, metavar="VAL", help="(k,q) box parameter")
    g.add_argument("--seed", metavar="SPEC", help="seed spec, e.g. rect:0,3a/4 or gauss")
    g.add_argument("--step", type=float, metavar="VAL",
                   help="translate step (switches orthonormalize to translates mode)")
    g.add_argument("--probe", action="store_true",
                   help="kq-check: run the completeness probe")
    g.add_argument("--config", metavar="PATH", help="sectioned key=value config file")

    codes = "\n".join(f"  {k:>2}  {v}" for k, v in sorted(EXIT_CODES.items()))
    parser = _Parser(prog="orthoframes", parents=[common],
                     formatter_class=argparse.RawDescriptionHelpFormatter,
                     description="Symbol-function orthonormalization of translate "
                                 "and Gabor families.",
                     epilog=f"exit codes:\n{codes}")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    sub.add_parser("orthonormalize", parents=[common], help="run the full pipeline")
    rp = sub.add_parser("reproduce", parents=[common], help="expected-vs-computed tables")
    rp.add_argument("target", choices=TARGETS)
    sub.add_parser("frame-bounds", parents=[common], help="frame bounds of integer translates")
    sub.add_parser("kq-check", parents=[common], help="(k,q)-representation checks")
    sub.add_parser("mra-compare", parents=[common],
                   help="compare Fourier-division and coefficient orthonormalization")
    return parser


def config_from_args(args):
    opt = vars(args)
    if opt.get("config"):
        cfg = RunConfig.load(opt["config"])
    else:
        cfg = RunConfig(seed=COMMAND_SEEDS.get(args.command, "gauss"))
    tols = dict(cfg.tolerances)
    for item in opt.get("tol", []):
        name, val = parse_tolerance(item)
        tols[name] = val
    names = {"radius": "overlap_radius", "coeff_radius": "coeff_radius"}
    changes = {names.get(k, k): opt.get(k) for k in
               ("target", "seed", "L", "A", "step", "radius", "coeff_radius", "N",
                "grid", "probe", "out")}
    return cfg.updated(command=args.command, tolerances=tols, **changes)


def _setup_log(out):
    log.setLevel(logging.INFO)
    handler = logging.FileHandler(os.path.join(out, "run.log"), encoding="utf-8")
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
    log.addHandler(handler)
    return handler


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    handler = None
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from_args(args)
        os.makedirs(cfg.out, exist_ok=True)
        handler = _setup_log(cfg.out)
        log.info("orthoframes %s: %s", __version__, " ".join(argv))
        with open(os.path.join(cfg.out, "config.ini"), "w", encoding="utf-8") as fh:
            fh.write(cfg.dumps())
        t0 = time.perf_counter()
        code = RUNNERS[cfg.command](cfg, cfg.out)
        log.info("finished with exit code %d in %.2fs", code, time.perf_counter() - t0)
        return code
    except OrthoFramesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        log.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    finally:
        if handler is not None:
            log.removeHandler(handler)
            handler.close()


if __name__ == "__main__":
    sys.exit(main())
