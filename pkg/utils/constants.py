"""Constants for nevanlab: defaults, output schemas, and status bands."""

VERSION = "0.4.0"

# ---------------------------------------------------------------------------
# Numerical defaults
# ---------------------------------------------------------------------------
QUADRATURE = {
    "min_nodes": 64,
    "max_nodes": 2**20,
    "quad_limit": 200,
    "default_tol": 1e-10,
}

ZEROS = {
    "min_points": 256,
    "max_points": 2**20,
    "nudge": 1e-9,
    "enclosure": 1e-8,
    "max_nudges": 4,
}

EVALUATION = {
    "float_tol": 1e-9,
    "guard_digits": 12,
    "max_dps": 2000,
    "max_terms": 5000,
}

SAMPLING = {
    "sup_samples": 100_000,
    "cartan_samples": 10_000,
    "exterior_base_points": 500,
    "boundary_points": 64,
}

SIEGEL = {
    "alpha": 0.25,
    "audit_constant": 10.0,
    "combination_search_rank": 4,
    "combination_bound": 2,
}

CARTAN = {
    # Candidate centres include pair midpoints and triple circumcentres up to this many atoms.
    "full_center_limit": 150,
    "polar_cells": (16, 32),
}

HEIGHT_TOL = 1e-12

# ---------------------------------------------------------------------------
# Output schemas (bump SCHEMA_VERSION on any column change)
# ---------------------------------------------------------------------------
SCHEMA_VERSION = 2

PROFILE_COLUMNS = ["curve", "r", "w0_re", "w0_im", "T", "err"]
FMT_COLUMNS = [
    "curve", "section", "r", "w0_re", "w0_im", "proximity", "characteristic",
    "zero_sum", "base_value", "residual", "error_budget", "zeros", "nudged", "passed",
]
ZERO_COLUMNS = ["re", "im", "multiplicity", "enclosure_radius"]
DISK_COLUMNS = ["label", "re", "im", "radius"]
POINT_COLUMNS = ["w_num", "w_den", "coords", "h_fs", "h_max"]
COUNT_COLUMNS = ["r", "H", "T_r", "T_scaled", "T_envelope", "C", "excluded", "kappa"]
ENVELOPE_COLUMNS = ["r", "H", "series", "value"]
WINDOW_COLUMNS = ["r", "H", "x", "y", "norm", "C", "bound", "member"]
SUITE_COLUMNS = ["check", "status", "detail", "seconds"]

# ---------------------------------------------------------------------------
# Report status colours (used by figures)
# ---------------------------------------------------------------------------
STATUS_COLORS = {
    "pass": "#009E73",
    "violation": "#D55E00",
    "vacuous": "#E69F00",
    "not_applicable": "#7F7F7F",
    "error": "#B2182B",
}


def humanize(snake_str: str) -> str:
    """Convert snake_case to Title Case. 'zero_sum' -> 'Zero Sum'."""
    return snake_str.replace("_", " ").title()


def status_color(status: str) -> str:
    """Colour for a check status; unknown statuses fall back to grey."""
    return STATUS_COLORS.get(status, STATUS_COLORS["not_applicable"])
