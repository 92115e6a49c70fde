import csv
import io
import json

from ._core import (
    InfeasibleError,
    IoError,
    SaturatedChannelError,
    Topology,
    average_delay,
    balance_traffic,
    generate_topology,
    link_load_at,
)
from . import _core


def _overrides(config):
    return json.dumps(config) if config else ""


def grade(topology, config=None):
    return json.loads(_core.grade(topology, _overrides(config)))


def route(topology, source, destination, algo="both", seed=1, config=None):
    return json.loads(_core.route(topology, source, destination, algo, seed, _overrides(config)))


def run_suite(node_counts, seeds_per_n, seed=1, config=None):
    """Returns (rows, summary): CSV rows as dicts and the summary document."""
    text, summary = _core.run_suite(list(node_counts), seeds_per_n, seed, _overrides(config))
    return list(csv.DictReader(io.StringIO(text))), json.loads(summary)


__all__ = [
    "InfeasibleError",
    "IoError",
    "SaturatedChannelError",
    "Topology",
    "average_delay",
    "balance_traffic",
    "generate_topology",
    "grade",
    "link_load_at",
    "route",
    "run_suite",
]
