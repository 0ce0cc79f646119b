"""Bilateral exchange under motivation and power imbalances.

Simulation engine covering single negotiations, supply chains, money-free
exchanges, trust-based power chains, and society-scale wealth dynamics,
plus a scenario-file CLI.
"""

__version__ = "0.1.0"

from . import chain, cli, core, errors, negotiation, nonmarket, powerchain, report, scenario, society

__all__ = [
    "chain",
    "cli",
    "core",
    "errors",
    "negotiation",
    "nonmarket",
    "powerchain",
    "report",
    "scenario",
    "society",
    "__version__",
]
