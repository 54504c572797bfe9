"""suite: the acceptance run over shipped fixtures, written as suite.json, suite.csv and suite.docx."""

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from commands import Artifacts, params
from commands.heights import liouville_sweep
from components.charts import suite_status_chart
from components.tables import suite_frame
from engine.counting import (
    bp_envelope_check,
    brute_force_counts,
    count_table,
    small_diam_vanishing_test,
    subgeometric_chains,
    window_scan,
)
from engine.disk_geometry import (
    cartan_exceptional,
    cover_disk,
    covering_bound,
    random_measure,
    verify_cartan,
    verify_covering,
)
from engine.errors import LabError
from engine.heights import RationalPoint, liouville_check, random_points
from engine.nevanlinna import (
    basepoint_bound_check,
    characteristic,
    characteristic_double_integral,
    projective_basepoint_bound,
    section_independence,
    verify_fmt,
    zero_count_bound_check,
)
from engine.sections import PolynomialSection, random_sections
from engine.siegel import brute_force_min_sup, build_aux_polynomial, build_system, siegel_small_kernel
from utils.config import load_curve_file
from utils.export import write_word_doc

logger = logging.getLogger(__name__)

NAME = "suite"
DEFAULTS = {"only": [], "record_timings": False, "liouville_sections": 100, "liouville_points": 100}

BASEPOINT_SWEEPS = {"line": (1.0, 2.0), "exp_affine": (1.0, 3.0)}
COUNT_RADII = (0.5, 1.0, 2.0)
COUNT_HEIGHTS = tuple(math.log(b) for b in (5, 10, 20, 50))


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    detail: str


# ---------------------------------------------------------------------------
# Acceptance checks
# ---------------------------------------------------------------------------
def check_fmt(ctx) -> CheckResult:
    identity = load_curve_file("identity")
    worst_identity = 0.0
    for a, r in ((0.4, 1.0), (1.5, 2.0)):
        s = PolynomialSection.linear([-a, 1], name=f"x1-{a:g}x0")
        for w0 in (0.0, 0.3 * r):
            rep = verify_fmt(identity, s, w0, r, ctx.tol)
            worst_identity = max(worst_identity, abs(rep.residual))
    exp_curve = load_curve_file("exp")
    rep = verify_fmt(exp_curve, PolynomialSection.linear([-1, 1], name="x1-x0"), 0.5, 7.0, ctx.tol)
    passed = worst_identity < 1e-8 and abs(rep.residual) < 1e-6 and rep.zeros == 3
    return CheckResult(passed, f"identity max |res| {worst_identity:.2e}; exp |res| {abs(rep.residual):.2e}, "
                               f"{rep.zeros} zeros")


def check_characteristic(ctx) -> CheckResult:
    worst_cross, worst_closed = 0.0, 0.0
    for name in ("identity", "exp"):
        curve = load_curve_file(name)
        for r in (0.5, 1.0, 2.0, 4.0):
            circle = characteristic(curve, r, ctx.tol).value
            double = characteristic_double_integral(curve, r, ctx.tol).value
            worst_cross = max(worst_cross, abs(circle - double))
            if name == "identity":
                worst_closed = max(worst_closed, abs(circle - 0.5 * math.log1p(r * r)))
    return CheckResult(worst_cross < 1e-6 and worst_closed < 1e-8,
                       f"circle vs double {worst_cross:.2e}; closed form {worst_closed:.2e}")


def check_basepoint(ctx) -> CheckResult:
    violations, worst, sweeps = 0, 0.0, 0
    for name, radii in BASEPOINT_SWEEPS.items():
        curve = load_curve_file(name)
        for r in radii:
            for eps in (0.5, 1.0):
                rep = basepoint_bound_check(curve, r, eps, grid_size=50, tol=ctx.tol)
                violations += rep.violations
                worst = max(worst, rep.worst_ratio)
                sweeps += 1
    return CheckResult(violations == 0, f"{violations} violations over {sweeps} sweeps, worst T_w/bound {worst:.3f}")


def check_cartan(ctx) -> CheckResult:
    violations, over = 0, 0
    for k in range(20):
        mu = random_measure(1 + (k * 37 + ctx.seed) % 100, 2.0, seed=ctx.seed + k)
        for H in (0.1, 0.05):
            disks = cartan_exceptional(mu, H)
            rep = verify_cartan(mu, H, disks, samples=10_000, seed=ctx.seed + k)
            violations += rep.violations
            over += rep.radii_sum > 5 * H
    return CheckResult(violations == 0 and over == 0, f"{violations} potential violations, {over} radii overruns")


def check_projective(ctx) -> CheckResult:
    curve = load_curve_file("exp")
    disks, rep = projective_basepoint_bound(curve, 5.0, ctx.tol, samples=500, seed=ctx.seed)
    return CheckResult(rep.passed and rep.status == "pass",
                       f"{len(disks)} disks, radii sum {rep.radii_sum:.3g} <= {rep.radii_bound:.3g}, "
                       f"{rep.violations} violations, slack {rep.slack:.2f}")


def check_covering(ctx) -> CheckResult:
    parts, passed = [], True
    for alpha, eps in ((0.5, 1.0), (0.3, 0.5)):
        cover = cover_disk(1.0, eps, alpha)
        rep = verify_covering(cover, 1.0, eps, alpha, grid=200)
        passed = passed and rep.passed and rep.size <= covering_bound(alpha, eps)
        parts.append(f"(alpha={alpha:g}, eps={eps:g}): N={rep.size}/{rep.bound}, uncovered {rep.uncovered}")
    return CheckResult(passed, "; ".join(parts))


def check_zero_count(ctx) -> CheckResult:
    curve = load_curve_file("exp")
    sections = random_sections(2, 1, 20, seed=ctx.seed)
    reports = [
        zero_count_bound_check(curve, 1, 0.5, sections[k:k + 5], (2.0, 4.0, 8.0), ctx.tol)
        for k in range(0, 20, 5)
    ]
    spread = section_independence(reports)
    passed = spread < 0.2 and all(rep.passed for rep in reports)
    return CheckResult(passed, f"C1 = {reports[0].C1:.3f}, relative spread {spread:.3f}")


def check_liouville(ctx) -> CheckResult:
    sharp = liouville_check(PolynomialSection.linear([0, 1], name="x1"), RationalPoint((2, 1)))
    sweep = liouville_sweep(3, 2, ctx.opts["liouville_sections"], ctx.opts["liouville_points"], ctx.seed, 20_000)
    violations = int((~sweep["passed"]).sum())
    passed = abs(sharp.margin) <= 1e-12 and violations == 0
    return CheckResult(passed, f"sharp margin {sharp.margin:.1e}; {violations} violations over {len(sweep)} pairs")


def check_siegel(ctx) -> CheckResult:
    exact, ratios = True, []
    for k in range(12):
        n_vars, d = ((2, 2 + k % 3) if k % 2 == 0 else (3, 1))
        m = math.comb(n_vars - 1 + d, d)
        count = max(1, math.floor(0.75 * m) - (k % 2))
        points = random_points(n_vars, count, seed=ctx.seed + k, bound=5)
        aux = build_aux_polynomial(points, d, 0.25, sup_samples=5_000, seed=ctx.seed)
        exact = exact and aux.exact_vanishing
        system = build_system(points, d)
        if system.n_monomials <= 6:
            brute = brute_force_min_sup(system.matrix, cap=20)
            found = max(abs(v) for v in siegel_small_kernel(system).vector)
            if brute is not None:
                ratios.append(found / brute)
    worst = max(ratios, default=1.0)
    return CheckResult(exact and worst <= 2.0, f"exact vanishing {exact}; worst sup ratio {worst:.2f} "
                                               f"over {len(ratios)} brute-forced systems")


def check_counting(ctx) -> CheckResult:
    curve = load_curve_file("interpolation")
    records = count_table(curve, COUNT_RADII, COUNT_HEIGHTS, 0.5, ctx.tol)
    oracle = brute_force_counts(curve, COUNT_RADII, COUNT_HEIGHTS)
    mismatches = sum(oracle[(rec.r, rec.H)] != rec.count for rec in records)
    envelope = bp_envelope_check(records)
    ctx.records = records
    return CheckResult(mismatches == 0 and envelope.passed,
                       f"{mismatches} oracle mismatches; kappa max/median "
                       f"{envelope.kappa_max:.3g}/{envelope.kappa_median:.3g}")


def check_windows(ctx) -> CheckResult:
    records = getattr(ctx, "records", None)
    if records is None:
        records = count_table(load_curve_file("interpolation"), COUNT_RADII, COUNT_HEIGHTS, 0.5, ctx.tol)
    report = window_scan(load_curve_file("interpolation"), 2.5, 0.5, 1.0, records)
    synthetic = subgeometric_chains([2.0**k for k in range(8)], 1.0)
    detected = len(synthetic) == 1 and len(synthetic[0]) == 8
    return CheckResult(report.passed and report.headline and detected,
                       f"{sum(report.spanning)} spanning chains in the complement; synthetic chain detected {detected}")


def check_small_diameter(ctx) -> CheckResult:
    curve = load_curve_file("lacunary")
    rep = small_diam_vanishing_test(curve, 2.5, math.log(6), 2, 4.0, alpha=1 / 3, tol=ctx.tol, sup_samples=5_000)
    pair = " and ".join(str(w) for w in rep.pair)
    return CheckResult(rep.status == "pass" and rep.held_out > 0,
                       f"{rep.status}: nodes {pair} at distance {rep.pair_distance:.3e} <= {rep.delta:.3e}, "
                       f"|W|={len(rep.witness)}, {rep.interpolated} interpolated, {rep.held_out} held out")


CHECKS = (
    ("fmt_identity", check_fmt),
    ("characteristic_cross_validation", check_characteristic),
    ("basepoint_comparison", check_basepoint),
    ("cartan", check_cartan),
    ("projective_exceptional_set", check_projective),
    ("covering", check_covering),
    ("zero_count_bound", check_zero_count),
    ("heights_liouville", check_liouville),
    ("siegel_auxpoly", check_siegel),
    ("counting_envelope", check_counting),
    ("windows", check_windows),
    ("small_diameter_vanishing", check_small_diameter),
)


class _Context:
    def __init__(self, config, opts):
        self.tol = config.tol
        self.seed = config.seed
        self.opts = opts


# ---------------------------------------------------------------------------
# Command
# ---------------------------------------------------------------------------
def add_parser(subparsers):
    p = subparsers.add_parser(NAME, help="run every acceptance check")
    p.add_argument("--only", action="append", choices=[name for name, _ in CHECKS],
                   help="run only this check (repeatable)")
    return p


def run(args, config) -> int:
    opts = params(args, config, NAME, DEFAULTS)
    out = Artifacts(config, NAME, opts)
    ctx = _Context(config, opts)
    selected = [(name, fn) for name, fn in CHECKS if not opts["only"] or name in opts["only"]]

    results = []
    for name, fn in selected:
        start = time.perf_counter()
        try:
            result = fn(ctx)
            status = "pass" if result.passed else "violation"
            detail = result.detail
        except LabError as exc:
            status, detail = "error", f"{type(exc).__name__}: {exc}"
        seconds = time.perf_counter() - start
        logger.info("%-34s %-9s %6.1fs  %s", name, status, seconds, detail)
        print(f"{status.upper():9s} {name}: {detail}")
        results.append({
            "check": name,
            "status": status,
            "detail": detail,
            "seconds": round(seconds, 1) if opts["record_timings"] else np.nan,
        })

    df = suite_frame(results)
    out.csv(NAME, df)
    out.figure(NAME, suite_status_chart(df.fillna({"seconds": 0.0})))
    failed = [r["check"] for r in results if r["status"] != "pass"]
    out.json(NAME, {"checks": results, "failed": failed, "passed": not failed})

    blocks = [{"heading": "Summary",
               "body": f"{len(results) - len(failed)} of {len(results)} checks passed."
                       + (f" Failed: {', '.join(failed)}." if failed else ""),
               "table": df}]
    blocks += [{"heading": r["check"].replace("_", " ").title(), "body": f"{r['status']}: {r['detail']}"}
               for r in results]
    out.written.append(write_word_doc("nevanlab acceptance suite", blocks, out.root / "suite.docx"))
    return out.finish(not failed, f"{len(results) - len(failed)}/{len(results)} checks passed")
