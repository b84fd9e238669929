"""Toric Hermitian Ricci-flat metrics: construction and verification."""

import json

from ._todkit import (
    InvalidInput,
    RodData,
    TodkitError,
    __version__,
    classify,
    cky_decay,
    conical_limit,
    curvature,
    eh_closed_form,
    eh_coords,
    eh_rod_data,
    lens_label,
    pd_regularity,
    pd_scan,
    tod_fields,
    tod_metric,
)
from ._todkit import verify as _verify


def verify(rod_json, suite="all"):
    """Run a verification suite on rod-file text and return the parsed report."""
    return json.loads(_verify(rod_json, suite))


__all__ = [
    "InvalidInput",
    "RodData",
    "TodkitError",
    "__version__",
    "classify",
    "cky_decay",
    "conical_limit",
    "curvature",
    "eh_closed_form",
    "eh_coords",
    "eh_rod_data",
    "lens_label",
    "pd_regularity",
    "pd_scan",
    "tod_fields",
    "tod_metric",
    "verify",
]
