"""windows: polynomial-window membership and subgeometric chains in its complement."""

from commands import Artifacts, float_list, params
from components.charts import window_chart
from components.tables import window_frame
from engine.counting import count_table, window_scan

NAME = "windows"
DEFAULTS = {"r_grid": [0.5, 1.0, 2.0], "H_grid": [1.0, 2.0, 3.0], "epsilon": 0.5, "gamma": 2.5, "A": 1.0}


def add_parser(subparsers):
    p = subparsers.add_parser(NAME, help="scan the polynomial window")
    p.add_argument("--gamma", type=float)
    p.add_argument("--A", type=float)
    p.add_argument("--r-grid", dest="r_grid", type=float_list)
    p.add_argument("--H-grid", dest="H_grid", type=float_list)
    return p


def run(args, config) -> int:
    opts = params(args, config, NAME, DEFAULTS)
    curve = config.load_curve()
    out = Artifacts(config, NAME, opts)

    table = count_table(curve, opts["r_grid"], opts["H_grid"], float(opts["epsilon"]), config.tol, config.jobs)
    report = window_scan(curve, float(opts["gamma"]), float(opts["epsilon"]), float(opts["A"]), table)
    df = window_frame(report, table)
    out.csv("window", df)
    out.figure("window", window_chart(df, list(report.chains)))
    out.json(NAME, {
        "curve": curve.name,
        "gamma": report.gamma,
        "headline_range": report.headline,
        "members": sum(report.members),
        "chains": [list(c) for c in report.chains],
        "spanning": list(report.spanning),
        "largest_disk": report.largest_disk,
        "passed": report.passed,
    })
    return out.finish(report.passed, f"{curve.name}: {len(report.chains)} chains, {sum(report.spanning)} spanning")
