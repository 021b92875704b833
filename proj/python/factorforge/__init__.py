"""Latent factor toolkit: factor bases from generator weights, coordinate
projection, per-category coordinate ranges, and uniform box resampling."""

import json as _json

from ._factorforge import *  # noqa: F401,F403
from ._factorforge import run_demo_json as _run_demo_json

__version__ = "0.1.0"


def run_demo(**kwargs):
    """Run the synthetic end-to-end comparison; returns the report as a dict.

    Keyword arguments mirror the CLI demo flags: dim, seed, n_per_category,
    image_dim, metric, max_draws, k.
    """
    return _json.loads(_run_demo_json(**kwargs))
