"""Plotly figure builders for nevanlab reports.

Figures are emitted as JSON specifications next to the CSV they describe; nothing is
rendered here.
"""

import numpy as np
import pandas as pd
import plotly.graph_objects as go

from utils.constants import humanize, status_color
from utils.theme import COLORS, PLOTLY_TEMPLATE


def _apply_template(fig: go.Figure, **overrides) -> go.Figure:
    """Apply the shared Plotly template with optional per-chart overrides."""
    layout = {**PLOTLY_TEMPLATE, **overrides}
    # Plotly.js shows "undefined" for a bare or missing title string.
    raw_title = layout.pop("title", layout.pop("title_text", None))
    title_font_size = layout.pop("title_font_size", 14)
    title_font_color = layout.pop("title_font_color", COLORS["text_primary"])
    if isinstance(raw_title, dict):
        raw_title.setdefault("text", "")
        layout["title"] = raw_title
    else:
        layout["title"] = dict(
            text=raw_title if raw_title else "",
            font=dict(size=title_font_size, color=title_font_color),
        )
    fig.update_layout(**layout)
    return fig


def _empty_chart(message: str, height: int = 200) -> go.Figure:
    """Return a blank Plotly figure with a centered message annotation."""
    fig = go.Figure()
    fig.add_annotation(
        text=message,
        showarrow=False,
        xref="paper", yref="paper",
        x=0.5, y=0.5,
        font=dict(size=14, color=COLORS["text_hint"]),
    )
    return _apply_template(fig, height=height)


def characteristic_chart(df: pd.DataFrame, closed_form: pd.DataFrame | None = None) -> go.Figure:
    """T(r) per (curve, base point). Expects PROFILE_COLUMNS."""
    if df.empty:
        return _empty_chart("No characteristic samples")
    fig = go.Figure()
    for (curve, w_re, w_im), group in df.groupby(["curve", "w0_re", "w0_im"], sort=True):
        label = curve if (w_re, w_im) == (0.0, 0.0) else f"{curve} @ {complex(w_re, w_im):g}"
        fig.add_trace(go.Scatter(
            x=group["r"],
            y=group["T"],
            error_y=dict(type="data", array=group["err"], visible=True),
            mode="lines+markers",
            marker=dict(size=6),
            name=label,
        ))
    if closed_form is not None and not closed_form.empty:
        fig.add_trace(go.Scatter(
            x=closed_form["r"],
            y=closed_form["T"],
            mode="lines",
            line=dict(dash="dash", color=COLORS["text_hint"]),
            name="closed form",
        ))
    return _apply_template(fig, title="Characteristic function", xaxis_title="r", yaxis_title="T(r)", height=360)


def fmt_residual_chart(df: pd.DataFrame) -> go.Figure:
    """|residual| against the error budget per FMT case, on a log axis."""
    if df.empty:
        return _empty_chart("No FMT cases")
    labels = [f"{c}/{s} r={r:g}" for c, s, r in zip(df["curve"], df["section"], df["r"])]
    fig = go.Figure()
    fig.add_trace(go.Bar(
        x=labels,
        y=df["residual"].abs().clip(lower=1e-18),
        marker_color=[status_color("pass" if ok else "violation") for ok in df["passed"]],
        name="|residual|",
    ))
    fig.add_trace(go.Scatter(
        x=labels,
        y=10 * df["error_budget"],
        mode="markers",
        marker=dict(symbol="line-ew-open", size=18, color=COLORS["bound"]),
        name="10 x error budget",
    ))
    return _apply_template(fig, title="First Main Theorem residuals", yaxis_type="log", height=360)


def disk_set_chart(disks: pd.DataFrame, r: float, title: str = "", points: np.ndarray | None = None) -> go.Figure:
    """Disks of a DiskSet (DISK_COLUMNS) over the circle |z| = r."""
    fig = go.Figure()
    theta = np.linspace(0, 2 * np.pi, 241)
    fig.add_trace(go.Scatter(
        x=r * np.cos(theta), y=r * np.sin(theta),
        mode="lines", line=dict(color=COLORS["observed"], width=1.5), name=f"|z| = {r:g}",
    ))
    for row in disks.itertuples():
        fill = COLORS["exceptional"] if row.label == "exceptional" else COLORS["covering"]
        fig.add_shape(
            type="circle",
            x0=row.re - row.radius, x1=row.re + row.radius,
            y0=row.im - row.radius, y1=row.im + row.radius,
            line=dict(color=COLORS["border"], width=0.5),
            fillcolor=fill,
        )
    if points is not None and len(points):
        fig.add_trace(go.Scatter(
            x=np.real(points), y=np.imag(points), mode="markers",
            marker=dict(size=4, color=COLORS["secondary"]), name="samples",
        ))
    return _apply_template(
        fig, title=title, height=480, width=520,
        yaxis=dict(PLOTLY_TEMPLATE["yaxis"], scaleanchor="x", scaleratio=1),
    )


def basepoint_chart(points: np.ndarray, ratios: np.ndarray, title: str = "") -> go.Figure:
    """Base points coloured by T_w(r) / bound."""
    if not len(points):
        return _empty_chart("No base points")
    fig = go.Figure(go.Scatter(
        x=np.real(points), y=np.imag(points), mode="markers",
        marker=dict(size=5, color=ratios, colorscale="Viridis", cmin=0, cmax=1,
                    colorbar=dict(title="T_w / bound")),
    ))
    return _apply_template(fig, title=title, height=460, width=520, showlegend=False)


def count_heatmap(df: pd.DataFrame, value: str = "C") -> go.Figure:
    """C(r, H) (or kappa) over the table grid. Expects COUNT_COLUMNS."""
    if df.empty:
        return _empty_chart("No counts")
    grid = df.pivot(index="H", columns="r", values=value).sort_index()
    fig = go.Figure(go.Heatmap(
        z=grid.values,
        x=[f"{c:g}" for c in grid.columns],
        y=[f"{h:.3g}" for h in grid.index],
        colorscale="YlOrBr",
        text=grid.values,
        texttemplate="%{text:.3g}",
        colorbar=dict(title=humanize(value) if value != "C" else "C"),
    ))
    return _apply_template(fig, title=f"{value} over (r, H)", xaxis_title="r", yaxis_title="H", height=380)


def envelope_chart(df: pd.DataFrame, H: float | None = None) -> go.Figure:
    """Counts against the exponential envelope along r (one H). Expects ENVELOPE_COLUMNS."""
    if df.empty:
        return _empty_chart("No envelope data")
    if H is None:
        H = df["H"].max()
    sub = df[df["H"] == H]
    fig = go.Figure()
    for series, color, dash in (("count", COLORS["observed"], None), ("envelope", COLORS["envelope"], "dash")):
        part = sub[sub["series"] == series].sort_values("r")
        fig.add_trace(go.Scatter(
            x=part["r"], y=part["value"], mode="lines+markers",
            line=dict(color=color, dash=dash), name=humanize(series),
        ))
    return _apply_template(fig, title=f"Counts and envelope at H = {H:.3g}", xaxis_title="r", yaxis_type="log", height=340)


def window_chart(df: pd.DataFrame, chains: list[tuple[float, ...]] | None = None) -> go.Figure:
    """Window members and complement in the (T, H) plane. Expects WINDOW_COLUMNS."""
    if df.empty:
        return _empty_chart("No window samples")
    fig = go.Figure()
    for flag, name, color in ((True, "member", COLORS["success"]), (False, "complement", COLORS["error"])):
        part = df[df["member"] == flag]
        fig.add_trace(go.Scatter(
            x=part["x"], y=part["y"], mode="markers",
            marker=dict(size=8, color=color, opacity=0.85), name=name,
        ))
    for k, chain in enumerate(chains or []):
        fig.add_annotation(
            text=f"chain {k + 1}: {len(chain)} pts", showarrow=False,
            xref="paper", yref="paper", x=1.0, y=1.0 - 0.06 * k, xanchor="right",
            font=dict(size=10, color=COLORS["error"]),
        )
    return _apply_template(fig, title="Polynomial window", xaxis_title="T(r)", yaxis_title="H", height=400)


def suite_status_chart(df: pd.DataFrame) -> go.Figure:
    """Wall time per acceptance check coloured by status. Expects SUITE_COLUMNS."""
    if df.empty:
        return _empty_chart("No suite results")
    fig = go.Figure(go.Bar(
        x=df["seconds"],
        y=df["check"],
        orientation="h",
        marker_color=[status_color(s) for s in df["status"]],
        text=df["status"],
        textposition="outside",
        cliponaxis=False,
    ))
    return _apply_template(
        fig,
        title="Acceptance suite",
        xaxis_title="Seconds",
        height=max(200, len(df) * 32),
        margin=dict(l=160, r=100, t=40, b=40),
        showlegend=False,
    )
