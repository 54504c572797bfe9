"""Design tokens for nevanlab report figures.

The palette is the Okabe-Ito set so bound, envelope and status colours stay
distinguishable in print and for colour-blind readers.
"""

# ---------------------------------------------------------------------------
# Palette
# ---------------------------------------------------------------------------
COLORS = {
    "primary": "#0072B2",
    "secondary": "#CC79A7",
    "accent": "#009E73",
    "success": "#009E73",
    "warning": "#E69F00",
    "error": "#D55E00",
    "info": "#56B4E9",
    "background": "#FFFFFF",
    "surface": "#FAFAFA",
    "text_primary": "#111111",
    "text_secondary": "#3D3D3D",
    "text_hint": "#7F7F7F",
    "border": "#DDDDDD",
    # Overlays on characteristic, count and disk plots
    "bound": "#D55E00",
    "envelope": "#CC79A7",
    "observed": "#000000",
    "exceptional": "rgba(213, 94, 0, 0.25)",
    "covering": "rgba(86, 180, 233, 0.20)",
}

FONT = {"family": "Latin Modern Roman, serif", "mono": "DejaVu Sans Mono", "axis": 13, "tick": 11, "title": 15}

_AXIS = dict(
    showline=True,
    mirror=True,
    ticks="outside",
    linecolor=COLORS["text_secondary"],
    gridcolor=COLORS["border"],
    zerolinecolor=COLORS["border"],
    title_font_size=FONT["axis"],
    tickfont_size=FONT["tick"],
)

# ---------------------------------------------------------------------------
# Layout shared by every emitted figure
# ---------------------------------------------------------------------------
PLOTLY_TEMPLATE = dict(
    font_family=FONT["family"],
    font_color=COLORS["text_secondary"],
    font_size=12,
    title_font_size=FONT["title"],
    title_font_color=COLORS["text_primary"],
    paper_bgcolor=COLORS["background"],
    plot_bgcolor=COLORS["surface"],
    xaxis=_AXIS,
    yaxis=_AXIS,
    colorway=[
        COLORS["primary"], COLORS["warning"], COLORS["accent"], COLORS["secondary"],
        COLORS["info"], COLORS["error"], "#F0E442", "#000000",
    ],
    margin=dict(l=64, r=24, t=48, b=52),
    legend=dict(orientation="h", yanchor="bottom", y=1.02, x=0),
)
