"""tcurve: characteristic-function profiles, optionally cross-checked against the double integral."""

from commands import Artifacts, as_complex, float_list, params
from components.charts import basepoint_chart, characteristic_chart
from components.tables import basepoint_frame, profile_frame
from engine.nevanlinna import (
    basepoint_bound_check,
    characteristic_double_integral,
    characteristic_profile,
    growth_estimate_check,
)

NAME = "tcurve"
DEFAULTS = {
    "radii": [0.5, 1.0, 2.0, 4.0],
    "base_points": [0.0],
    "cross_check": False,
    "cross_tol": 1e-6,
    "basepoint_epsilon": 0.0,
    "basepoint_grid": 50,
    "growth": False,
}


def add_parser(subparsers):
    p = subparsers.add_parser(NAME, help="tabulate T(r) and T_w0(r)")
    p.add_argument("--radii", type=float_list, help="comma-separated radii")
    p.add_argument("--cross-check", dest="cross_check", action="store_true", default=None,
                   help="compare with the double-integral form")
    p.add_argument("--basepoint-epsilon", dest="basepoint_epsilon", type=float,
                   help="affine curves: sweep T_w(r) over D(0, r) against A*(T((1+eps)r) + 1)")
    p.add_argument("--growth", action="store_true", default=None,
                   help="check log sup |f| <= 3*T_f(2r) + slack per coordinate")
    return p


def run(args, config) -> int:
    opts = params(args, config, NAME, DEFAULTS)
    curve = config.load_curve()
    out = Artifacts(config, NAME, opts)

    profiles = [
        characteristic_profile(curve, opts["radii"], as_complex(w), config.tol) for w in opts["base_points"]
    ]
    df = profile_frame(profiles)
    out.csv("profile", df)
    out.figure("profile", characteristic_chart(df))

    passed = all(p.monotone for p in profiles)
    cross = []
    if opts["cross_check"]:
        for p in profiles:
            for r, t, _ in p.samples:
                double = characteristic_double_integral(curve, r, config.tol, w0=p.base_point)
                cross.append({"r": r, "w0": p.base_point, "circle": t, "double": double.value,
                              "difference": abs(t - double.value)})
        passed = passed and all(c["difference"] < opts["cross_tol"] for c in cross)

    sweeps = []
    if opts["basepoint_epsilon"]:
        eps = float(opts["basepoint_epsilon"])
        for r in sorted(float(x) for x in opts["radii"]):
            rep = basepoint_bound_check(curve, r, eps, int(opts["basepoint_grid"]), config.tol)
            frame = basepoint_frame(rep)
            out.csv(f"basepoint_r{r:g}", frame)
            out.figure(f"basepoint_r{r:g}", basepoint_chart(
                frame["w_re"].to_numpy() + 1j * frame["w_im"].to_numpy(), frame["ratio"].to_numpy(),
                title=f"T_w({r:g}) / A(T({1 + eps:g}r) + 1)",
            ))
            sweeps.append({"r": r, "A": rep.A, "bound": rep.bound, "worst_ratio": rep.worst_ratio,
                           "violations": rep.violations})
            passed = passed and rep.passed

    growth = []
    if opts["growth"]:
        growth = list(growth_estimate_check(curve, opts["radii"], config.tol).rows)
        passed = passed and all(row["passed"] for row in growth)

    out.json(NAME, {
        "curve": curve.name,
        "monotone": [p.monotone for p in profiles],
        "cross_check": cross,
        "basepoint": sweeps,
        "growth": growth,
        "passed": passed,
    })
    return out.finish(passed, f"{curve.name}: {len(df)} samples")
