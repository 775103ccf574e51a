"""Quantum content-addressable memory simulator."""

import json

from . import _core
from ._core import (
    CapacityError,
    VerificationError,
    brute_force_matches,
    encode_kmer,
    generate_dna,
    iterations_from_theta,
    jaccard_classical,
    mutate,
    plant_matches,
    solutions_from_theta,
    theta_from_overlap,
)

__all__ = [
    "CapacityError",
    "VerificationError",
    "brute_force_matches",
    "cli",
    "encode_kmer",
    "generate_dna",
    "heqc",
    "iterations_from_theta",
    "jaccard_classical",
    "jaccard_qcam",
    "mutate",
    "plant_matches",
    "run_qcam",
    "solutions_from_theta",
    "theta_from_overlap",
]


def run_qcam(a, b, depth, iterations, shots, seed):
    """Run the Grover search and return the verified matches as a dict."""
    return json.loads(_core.run_qcam(a, b, depth, iterations, shots, seed))


def heqc(a, b, depth, shots, seed, variant="hadamard"):
    """Estimate the number of matching pairs."""
    return json.loads(_core.heqc(a, b, depth, shots, seed, variant))


def jaccard_qcam(a, b, k, seed=1, variant="hadamard"):
    """Jaccard index of two DNA strands via the quantum pipeline."""
    return json.loads(_core.jaccard_qcam(a, b, k, seed, variant))


def cli(*args):
    """Run the command line tool in-process; returns (exit_code, stdout, stderr)."""
    return _core.cli(["qcamsim", *map(str, args)])
