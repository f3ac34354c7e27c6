# SPDX-License-Identifier: Apache-2.0
"""Lipschitz retractions on nets: spiderweb and grid constructions with exact checks."""

from ._lipnet import (
    PreconditionError,
    ResourceError,
    basis_constant,
    certify_spiderweb,
    family_bound,
    free_norm,
    grid_identities,
    grid_sk_sequence,
    q_sequence,
    spiderweb_points,
)

__all__ = [
    "PreconditionError",
    "ResourceError",
    "basis_constant",
    "certify_spiderweb",
    "family_bound",
    "free_norm",
    "grid_identities",
    "grid_sk_sequence",
    "q_sequence",
    "spiderweb_points",
]
