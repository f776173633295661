"""Partition functions over optimal Hamming medians.

Thin Python layer over the C++ core: exact partition functions Z(B, w),
the modular #SAT pipeline, parsimony scenario counting on trees, and
exact diagnostics for the median-sampling Markov chains. Big integers
and exact rationals are returned as decimal strings.
"""

from pathlib import Path

from ._core import (
    GuardError,
    InputError,
    brute_force_count,
    conductance,
    count_sat,
    diagnose,
    hamming,
    medians,
    partition_function,
    torpid_bound,
    torpid_instance,
    tree_count,
    tree_score,
    verify_separation,
    verify_tables,
    verify_tree_separation,
)

__all__ = [
    "GuardError",
    "InputError",
    "brute_force_count",
    "cli_path",
    "conductance",
    "count_sat",
    "diagnose",
    "hamming",
    "medians",
    "partition_function",
    "torpid_bound",
    "torpid_instance",
    "tree_count",
    "tree_score",
    "verify_separation",
    "verify_tables",
    "verify_tree_separation",
]


def cli_path() -> str:
    """Path of the bundled command-line binary."""
    from . import _core

    for base in (Path(_core.__file__).parent, Path(__file__).parent):
        p = base / "medz"
        if p.is_file():
            return str(p)
    raise FileNotFoundError("CLI binary not bundled with this install")
