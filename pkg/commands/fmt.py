"""fmt: First Main Theorem residual sweeps over sections, radii and base points."""

import itertools

from commands import Artifacts, as_complex, float_list, params
from components.charts import fmt_residual_chart
from components.tables import fmt_frame
from engine.nevanlinna import verify_fmt
from engine.sections import section_from_expression

NAME = "fmt"
DEFAULTS = {"sections": ["x1 - x0"], "radii": [1.0, 2.0], "base_points": [0.5]}


def add_parser(subparsers):
    p = subparsers.add_parser(NAME, help="verify the First Main Theorem identity")
    p.add_argument("--section", dest="sections", action="append", help="section in x0..xN (repeatable)")
    p.add_argument("--radii", type=float_list)
    return p


def run(args, config) -> int:
    opts = params(args, config, NAME, DEFAULTS)
    curve = config.load_curve()
    sections = [section_from_expression(text, curve.n_vars) for text in opts["sections"]]
    out = Artifacts(config, NAME, opts)

    reports = [
        verify_fmt(curve, s, as_complex(w), r, config.tol)
        for s, r, w in itertools.product(sections, sorted(opts["radii"]), opts["base_points"])
    ]
    df = fmt_frame(reports)
    out.csv("fmt", df)
    out.figure("fmt", fmt_residual_chart(df))
    passed = all(rep.passed for rep in reports)
    worst = max((abs(rep.residual) for rep in reports), default=0.0)
    out.json(NAME, {"curve": curve.name, "cases": len(reports), "max_abs_residual": worst, "passed": passed})
    return out.finish(passed, f"{curve.name}: {len(reports)} cases, max |residual| {worst:.2e}")
