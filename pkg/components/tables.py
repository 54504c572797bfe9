"""DataFrame builders: every tabular artifact passes through one of these before export."""

import math

import numpy as np
import pandas as pd

from engine.disk_geometry import DiskSet
from engine.heights import HeightedPoint
from engine.zeros import ZeroCount
from utils.constants import (
    COUNT_COLUMNS,
    DISK_COLUMNS,
    ENVELOPE_COLUMNS,
    FMT_COLUMNS,
    POINT_COLUMNS,
    PROFILE_COLUMNS,
    SUITE_COLUMNS,
    WINDOW_COLUMNS,
    ZERO_COLUMNS,
)


def _frame(rows: list[dict], columns: list[str], sort_by: list[str] | None = None) -> pd.DataFrame:
    """Fixed column order and a stable sort so exported bytes do not depend on run order."""
    df = pd.DataFrame(rows, columns=columns)
    if sort_by and not df.empty:
        df = df.sort_values(sort_by, kind="mergesort").reset_index(drop=True)
    return df


def profile_frame(profiles) -> pd.DataFrame:
    rows = [row for p in profiles for row in p.rows()]
    return _frame(rows, PROFILE_COLUMNS, ["curve", "w0_re", "w0_im", "r"])


def fmt_frame(reports) -> pd.DataFrame:
    return _frame([rep.row() for rep in reports], FMT_COLUMNS)


def zero_frame(zc: ZeroCount) -> pd.DataFrame:
    rows = [rec.to_dict() for rec in zc]
    return _frame(rows, ZERO_COLUMNS, ["re", "im"])


def disk_frame(disks: DiskSet) -> pd.DataFrame:
    rows = [{"label": disks.label, **item} for item in disks.to_dict()["disks"]]
    return _frame(rows, DISK_COLUMNS)


def point_frame(points: list[HeightedPoint]) -> pd.DataFrame:
    return _frame([hp.row() for hp in points], POINT_COLUMNS)


def count_frame(records) -> pd.DataFrame:
    return _frame([rec.row() for rec in records], COUNT_COLUMNS, ["r", "H"])


def envelope_frame(rows: list[dict]) -> pd.DataFrame:
    return _frame(rows, ENVELOPE_COLUMNS, ["H", "series", "r"])


def window_frame(report, table) -> pd.DataFrame:
    rows = []
    for rec, row in zip(table, report.rows()):
        bound = report.epsilon * max(0.0, rec.T_scaled + rec.H) ** report.gamma
        rows.append({"r": rec.r, "H": rec.H, "bound": bound, **row})
    return _frame(rows, WINDOW_COLUMNS, ["r", "H"])


def suite_frame(results: list[dict]) -> pd.DataFrame:
    return _frame(results, SUITE_COLUMNS)


def basepoint_frame(report) -> pd.DataFrame:
    """One row per swept base point with the ratio T_w / bound."""
    w = np.asarray(report.base_points)
    bound = report.bound
    return pd.DataFrame({
        "w_re": w.real,
        "w_im": w.imag,
        "T_w": report.values,
        "err": report.errors,
        "ratio": report.values / bound if bound > 0 else np.full(w.shape, math.nan),
    })

