"""Instance files, generators, oracles, the property suite and the CLI."""

from .generate import FAMILIES, generate, random_multi_allocation, random_valuation
from .io import Instance, dumps, load, loads, recheck_report, save
from .oracles import oracle_best_allocation, oracle_mms, oracle_omega
from .search import search_d3
from .suite import run_suite

__all__ = [
    "FAMILIES",
    "Instance",
    "dumps",
    "generate",
    "load",
    "loads",
    "oracle_best_allocation",
    "oracle_mms",
    "oracle_omega",
    "random_multi_allocation",
    "random_valuation",
    "recheck_report",
    "run_suite",
    "save",
    "search_d3",
]
