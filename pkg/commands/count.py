"""count: C(r, H) tables against the exponential envelope."""

from commands import Artifacts, float_list, params
from components.charts import count_heatmap, envelope_chart
from components.tables import count_frame, envelope_frame
from engine.counting import bp_envelope_check, count_table, counts_monotone, envelope_rows

NAME = "count"
DEFAULTS = {"r_grid": [0.5, 1.0, 2.0], "H_grid": [1.0, 2.0, 3.0], "epsilon": 0.5}


def add_parser(subparsers):
    p = subparsers.add_parser(NAME, help="count table and envelope check")
    p.add_argument("--r-grid", dest="r_grid", type=float_list)
    p.add_argument("--H-grid", dest="H_grid", type=float_list)
    p.add_argument("--epsilon", type=float)
    return p


def run(args, config) -> int:
    opts = params(args, config, NAME, DEFAULTS)
    curve = config.load_curve()
    out = Artifacts(config, NAME, opts)

    records = count_table(curve, opts["r_grid"], opts["H_grid"], float(opts["epsilon"]), config.tol, config.jobs)
    envelope = bp_envelope_check(records)
    counts = count_frame(records)
    out.csv("counts", counts)
    out.csv("envelope", envelope_frame(envelope_rows(records)))
    out.figure("counts", count_heatmap(counts))
    out.figure("envelope", envelope_chart(envelope_frame(envelope_rows(records))))

    monotone = counts_monotone(records)
    passed = envelope.passed and monotone
    out.json(NAME, {
        "curve": curve.name,
        "cells": len(records),
        "monotone": monotone,
        "kappa_max": envelope.kappa_max,
        "kappa_median": envelope.kappa_median,
        "diagonal_decreasing": envelope.diagonal_decreasing,
        "passed": passed,
    })
    return out.finish(passed, f"{curve.name}: kappa max {envelope.kappa_max:.3g}, median {envelope.kappa_median:.3g}")
