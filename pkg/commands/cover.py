"""cover: hyperbolic coverings of D(0, r) by balls of small (1+eps)r-diameter."""

from dataclasses import asdict

from commands import Artifacts, params
from components.charts import disk_set_chart
from components.tables import disk_frame
from engine.disk_geometry import cover_disk, verify_covering

NAME = "cover"
DEFAULTS = {"r": 1.0, "epsilon": 1.0, "alpha": 0.5, "method": "rings", "grid": 200}


def add_parser(subparsers):
    p = subparsers.add_parser(NAME, help="cover D(0, r) by balls of diameter < alpha")
    p.add_argument("--r", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--method", choices=("rings", "greedy"))
    return p


def run(args, config) -> int:
    opts = params(args, config, NAME, DEFAULTS)
    r, eps, alpha = float(opts["r"]), float(opts["epsilon"]), float(opts["alpha"])
    out = Artifacts(config, NAME, opts)

    cover = cover_disk(r, eps, alpha, method=opts["method"])
    report = verify_covering(cover, r, eps, alpha, grid=int(opts["grid"]))
    out.csv("disks", disk_frame(cover))
    out.figure("disks", disk_set_chart(disk_frame(cover), r, title=f"{opts['method']} covering, alpha={alpha:g}"))
    out.json(NAME, {**asdict(report), "passed": report.passed})
    return out.finish(report.passed, f"N={report.size} (bound {report.bound}), uncovered={report.uncovered}")
