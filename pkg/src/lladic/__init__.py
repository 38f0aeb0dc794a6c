"""Exact l-adic lattice algebra: perfect symplectic pairings, residue embeddings,
and certified obstructions to perfect invariant pairings."""

from .errors import (
    BadParameters,
    BadSpec,
    DegenerateBlock,
    DegenerateForm,
    HypothesesUnmet,
    LadicError,
    OracleRefuted,
    PreconditionFailed,
    PrecisionExhausted,
    RigidityViolation,
)
from .latmod import BilinearForm, Lattice, dual_lattice, is_perfect, lattice_intersect, lattice_sum, snf
from .localring import base_ring, cyclotomic_ring, make_ring, real_cyclotomic_ring, unramified_ring
from .sharpness import abvar_scenario, build_counterexample, no_perfect_pairing_oracle, no_residue_symplectic_embedding
from .symplectify import perfect_pairing, reduce_embedding, stabilize_lattice

__version__ = "0.1.0"
