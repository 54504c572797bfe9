"""zeros: locate and count the zeros of a pulled-back section in a disk."""

from commands import Artifacts, params
from components.tables import zero_frame
from engine.entire_curves import pullback
from engine.sections import section_from_expression
from engine.zeros import count_zeros

NAME = "zeros"
DEFAULTS = {"section": "x1 - x0", "r": 1.0}


def add_parser(subparsers):
    p = subparsers.add_parser(NAME, help="count zeros of phi*s in D(0, r)")
    p.add_argument("--section")
    p.add_argument("--r", type=float)
    return p


def run(args, config) -> int:
    opts = params(args, config, NAME, DEFAULTS)
    curve = config.load_curve()
    s = section_from_expression(opts["section"], curve.n_vars)
    out = Artifacts(config, NAME, opts)

    zc = count_zeros(pullback(curve, s).raw, float(opts["r"]))
    out.csv("zeros", zero_frame(zc))
    out.json(NAME, {
        "curve": curve.name,
        "section": str(s),
        "radius": zc.radius,
        "requested_radius": zc.requested_radius,
        "nudges": zc.nudges,
        "winding": zc.winding,
        "total": zc.total,
    })
    return out.finish(True, f"{zc.total} zeros of {s} in D(0, {zc.radius:g})")
