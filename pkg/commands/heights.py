"""heights: rational points of bounded height on the curve, and Liouville sweeps."""

from dataclasses import asdict

import pandas as pd

from commands import Artifacts, params
from components.tables import point_frame
from engine.heights import enumerate_points, liouville_check, random_points
from engine.sections import random_sections

NAME = "heights"
DEFAULTS = {"r": 2.0, "H": 2.0, "liouville_sections": 20, "liouville_points": 50, "degree": 2,
            "sup_samples": 20_000}


def add_parser(subparsers):
    p = subparsers.add_parser(NAME, help="enumerate S(r, H) and check the Liouville inequality")
    p.add_argument("--r", type=float)
    p.add_argument("--H", type=float)
    return p


def liouville_sweep(n_vars: int, degree: int, n_sections: int, n_points: int, seed: int, sup_samples: int):
    """Every (section, point) pair from seeded random draws; sup norms sampled once per section."""
    rows = []
    points = random_points(n_vars, n_points, seed=seed)
    for s in random_sections(n_vars, degree, n_sections, seed=seed):
        sup = s.sampled_sup(sup_samples, seed)
        for k, p in enumerate(points):
            rep = liouville_check(s, p, sup=sup)
            rows.append({"section": s.name, "point": k, **asdict(rep), "margin": rep.margin, "passed": rep.passed})
    return pd.DataFrame(rows)


def run(args, config) -> int:
    opts = params(args, config, NAME, DEFAULTS)
    out = Artifacts(config, NAME, opts)
    summary = {}

    if config.curve is not None:
        curve = config.load_curve()
        points = enumerate_points(curve, float(opts["r"]), float(opts["H"]), jobs=config.jobs)
        out.csv("points", point_frame(points))
        summary["curve"] = curve.name
        summary["points"] = len(points)
        n_vars = curve.n_vars
    else:
        n_vars = 3

    sweep = liouville_sweep(n_vars, int(opts["degree"]), int(opts["liouville_sections"]),
                            int(opts["liouville_points"]), config.seed, int(opts["sup_samples"]))
    out.csv("liouville", sweep)
    violations = int((~sweep["passed"]).sum()) if not sweep.empty else 0
    summary.update(pairs=len(sweep), violations=violations, passed=violations == 0)
    out.json(NAME, summary)
    return out.finish(violations == 0, f"{len(sweep)} Liouville pairs, {violations} violations")
