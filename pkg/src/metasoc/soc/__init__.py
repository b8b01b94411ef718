"""Desk-scale simulators of self-organized-criticality phenotypes."""

from .adoption import (AdoptionConfig, AdoptionTrace, build_graph, mean_adoption_curve,
                       run_adoption, segment_avalanches)
from .records import (AvalancheRecord, avalanche_distribution, histogram_csv, records_csv,
                      records_json, size_exponent)
from .sandpile import Sandpile, SandpileConfig, drop_sites, run_sandpile

__all__ = [
    "AdoptionConfig", "AdoptionTrace", "AvalancheRecord", "Sandpile", "SandpileConfig",
    "avalanche_distribution", "build_graph", "drop_sites", "histogram_csv",
    "mean_adoption_curve", "records_csv", "records_json", "run_adoption", "run_sandpile",
    "segment_avalanches", "size_exponent",
]
