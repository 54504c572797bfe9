"""auxpoly: auxiliary polynomials through rational points of the curve, with the Siegel audit."""

import math

from commands import Artifacts, params
from components.tables import point_frame
from engine.errors import PreconditionError
from engine.heights import enumerate_points
from engine.sections import monomial_exponents
from engine.siegel import build_aux_polynomial, gromov_check

NAME = "auxpoly"
DEFAULTS = {"r": 2.0, "H": 2.0, "d": 2, "alpha": 0.25, "sup_samples": 20_000, "gromov_degrees": []}


def add_parser(subparsers):
    p = subparsers.add_parser(NAME, help="build an auxiliary polynomial on S(r, H)")
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", type=float)
    return p


def run(args, config) -> int:
    opts = params(args, config, NAME, DEFAULTS)
    curve = config.load_curve()
    d, alpha = int(opts["d"]), float(opts["alpha"])
    out = Artifacts(config, NAME, opts)

    points = enumerate_points(curve, float(opts["r"]), float(opts["H"]), jobs=config.jobs)
    capacity = math.floor((1 - alpha) * len(monomial_exponents(curve.n_vars, d)))
    if not points:
        raise PreconditionError(f"S(r, H) is empty for {curve.name}; raise r or H")
    used = points[:capacity]
    if len(used) < len(points):
        print(f"using the first {len(used)} of {len(points)} points (capacity at d={d}, alpha={alpha:g})")
    out.csv("points", point_frame(used))

    aux = build_aux_polynomial(used, d, alpha, sup_samples=int(opts["sup_samples"]), seed=config.seed)
    report = {
        "curve": curve.name,
        **aux.to_dict(),
        "section": str(aux.section),
        "exact_vanishing": aux.exact_vanishing,
        "log_sup": aux.siegel.log_sup,
        "audit_ok": aux.siegel.audit_ok,
        "empirical_c3": aux.empirical_c3,
    }
    passed = aux.exact_vanishing
    if opts["gromov_degrees"]:
        gromov = gromov_check(opts["gromov_degrees"], seed=config.seed, sup_samples=int(opts["sup_samples"]))
        report["gromov"] = {"c": gromov.c, "c_max": gromov.c_max, "slope": gromov.slope,
                            "curvature": gromov.curvature, "violations": gromov.violations,
                            "ceiling_violations": gromov.ceiling_violations, "passed": gromov.passed}
        passed = passed and gromov.passed
    report["passed"] = passed
    out.json(NAME, report)
    return out.finish(passed, f"degree {d} section through {len(used)} points: {aux.section}")
