"""Exact couples, spectral sequences and Morse-Smale chain complexes."""

from couplex._core import (
    Error,
    FieldMismatch,
    ParseError,
    ValidationError,
    chain_complex,
    cli,
    disk_circle_pair_check,
    fixture_json,
    fixture_names,
    kunneth_check,
    morse_counts,
    random_model_json,
    spectral_sequence_json,
    total_homology,
)

__all__ = [
    "Error",
    "FieldMismatch",
    "ParseError",
    "ValidationError",
    "chain_complex",
    "cli",
    "disk_circle_pair_check",
    "fixture_json",
    "fixture_names",
    "kunneth_check",
    "morse_counts",
    "random_model_json",
    "spectral_sequence_json",
    "total_homology",
]
