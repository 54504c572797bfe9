"""cartan: exceptional disks for random atomic measures, or E_r of a projective curve."""

from dataclasses import asdict

import pandas as pd

from commands import Artifacts, float_list, params
from components.charts import disk_set_chart
from components.tables import disk_frame
from engine.disk_geometry import cartan_exceptional, random_measure, verify_cartan
from engine.errors import ConfigError
from engine.nevanlinna import projective_basepoint_bound

NAME = "cartan"
DEFAULTS = {
    "mode": "measures",
    "trials": 20,
    "max_atoms": 100,
    "max_mass": 2.0,
    "H_values": [0.1, 0.05],
    "samples": 10_000,
    "r": 5.0,
    "exterior_points": 500,
}


def add_parser(subparsers):
    p = subparsers.add_parser(NAME, help="Cartan exceptional disks")
    p.add_argument("--mode", choices=("measures", "curve"))
    p.add_argument("--trials", type=int)
    p.add_argument("--H-values", dest="H_values", type=float_list)
    p.add_argument("--r", type=float)
    return p


def _measures(opts: dict, config, out: Artifacts) -> int:
    rows = []
    for k in range(int(opts["trials"])):
        n_atoms = 1 + (k * 7919 + config.seed) % int(opts["max_atoms"])
        mu = random_measure(n_atoms, float(opts["max_mass"]), seed=config.seed + k)
        for H in opts["H_values"]:
            disks = cartan_exceptional(mu, H)
            report = verify_cartan(mu, H, disks, samples=int(opts["samples"]), seed=config.seed + k)
            rows.append({"trial": k, "atoms": n_atoms, **asdict(report), "passed": report.passed})
    df = pd.DataFrame(rows)
    out.csv("trials", df)
    passed = bool(df["passed"].all()) if not df.empty else True
    out.json(NAME, {"mode": "measures", "trials": len(rows), "violations": int(df["violations"].sum()),
                    "passed": passed})
    return out.finish(passed, f"{len(rows)} measure/H pairs, {int(df['violations'].sum())} violations")


def _curve(opts: dict, config, out: Artifacts) -> int:
    curve = config.load_curve()
    r = float(opts["r"])
    disks, report = projective_basepoint_bound(
        curve, r, config.tol, samples=int(opts["exterior_points"]), seed=config.seed
    )
    out.csv("exceptional", disk_frame(disks))
    out.figure("exceptional", disk_set_chart(disk_frame(disks), r, title=f"E_r for {curve.name}, r={r:g}"))
    summary = {**asdict(report), "radii_bound": report.radii_bound, "bound": report.bound,
               "slack": report.slack, "passed": report.passed}
    out.json(NAME, {"mode": "curve", "curve": curve.name, **summary})
    return out.finish(report.passed, f"{curve.name} r={r:g}: {report.status}, {len(disks)} disks")


def run(args, config) -> int:
    opts = params(args, config, NAME, DEFAULTS)
    out = Artifacts(config, NAME, opts)
    if opts["mode"] == "measures":
        return _measures(opts, config, out)
    if opts["mode"] == "curve":
        return _curve(opts, config, out)
    raise ConfigError(f"unknown cartan mode {opts['mode']!r}")
