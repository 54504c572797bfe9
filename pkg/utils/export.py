"""Export utilities: CSV and JSON artifacts with config headers, figure specs, Word reports."""

import io
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pandas as pd
import plotly.graph_objects as go

from utils.constants import SCHEMA_VERSION, VERSION


def _json_default(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _finite(obj):
    """Replace non-finite floats by strings so the output stays strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def to_json(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators."""
    plain = json.loads(json.dumps(obj, default=_json_default))
    return json.dumps(_finite(plain), sort_keys=True, indent=2, allow_nan=False)


def header_lines(config: dict) -> str:
    return (
        f"# nevanlab {VERSION} schema {SCHEMA_VERSION}\n"
        f"# config: {json.dumps(_finite(json.loads(json.dumps(config, default=_json_default))), sort_keys=True)}\n"
    )


def csv_text(df: pd.DataFrame, config: dict) -> str:
    """CSV with the version and config comment header."""
    buf = io.StringIO()
    buf.write(header_lines(config))
    df.to_csv(buf, index=False, float_format="%.17g", lineterminator="\n")
    return buf.getvalue()


def write_csv(df: pd.DataFrame, path: str | Path, config: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(df, config), encoding="utf-8")
    return path


def read_csv(path: str | Path) -> pd.DataFrame:
    """Read an exported CSV, skipping the comment header."""
    return pd.read_csv(path, comment="#")


def write_json(report: dict, path: str | Path, config: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"version": VERSION, "schema": SCHEMA_VERSION, "config": config, "report": report}
    path.write_text(to_json(payload) + "\n", encoding="utf-8")
    return path


def write_figure(fig: go.Figure, path: str | Path) -> Path:
    """Store a Plotly figure as its JSON specification (no rendering)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(fig.to_json(), encoding="utf-8")
    return path


def generate_word_doc(title: str, content_blocks: list[dict]) -> bytes:
    """Generate a Word document from content blocks.

    Each block: {"heading": str, "body": str, "table": DataFrame | None}
    """
    from docx import Document

    doc = Document()
    doc.add_heading(title, level=0)

    for block in content_blocks:
        if block.get("heading"):
            doc.add_heading(block["heading"], level=1)
        if block.get("body"):
            doc.add_paragraph(block["body"])
        table = block.get("table")
        if table is not None and not table.empty:
            grid = doc.add_table(rows=1, cols=len(table.columns))
            grid.style = "Light Grid Accent 1"
            for cell, name in zip(grid.rows[0].cells, table.columns):
                cell.text = str(name)
            for row in table.itertuples(index=False):
                cells = grid.add_row().cells
                for cell, value in zip(cells, row):
                    cell.text = f"{value:.6g}" if isinstance(value, float) else str(value)

    buf = io.BytesIO()
    doc.save(buf)
    buf.seek(0)
    return buf.getvalue()


def write_word_doc(title: str, content_blocks: list[dict], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(generate_word_doc(title, content_blocks))
    return path
