"""Exact lattice tools for congruences of Siegel theta series.

Even lattices are given by integer Gram matrices.  The package enumerates
short vectors, splits lattices along automorphisms of odd prime order and
counts representation numbers ``A(M, T)`` exactly.
"""
from .catalog import build_golay_qr23, build_leech_from_golay, catalog
from .enumeration import (
    constrained_vectors,
    count_vectors,
    count_vectors_with_norm,
    min_norm_and_kissing,
    short_vectors,
    vectors_with_norm,
)
from .errors import LatticeError
from .fixpoint import (
    Automorphism,
    GroupRingElement,
    fixed_sublattice,
    iota_embed,
    iota_preimage,
    is_fixed_point_free,
    lemma_chain_check,
    projected_lattice,
    sigma_complement,
    splitting_check,
    validate_automorphism,
)
from .lattice import (
    BinaryForm,
    Lattice,
    SublatticeHandle,
    decompose,
    direct_sum,
    is_isometric_small,
    reduce_binary,
    validate_even_lattice,
)
from .theta import (
    SemiIntegralForm,
    congruence_check_theta_op,
    convolution_check,
    fixed_congruence_check,
    representation_number,
    singularity_check,
    theta_operator,
    theta_table,
)
