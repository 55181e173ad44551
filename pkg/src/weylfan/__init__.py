"""Weyl-chamber fans of maximal torus closures and their automorphisms.

For a simple adjoint group, the closure of a maximal torus in the wonderful
compactification is a smooth projective toric variety whose fan is cut out
by the Weyl chambers.  This package builds that fan for every simple type,
computes its lattice automorphism group and, independently, the
automorphism group of the coroot system, and checks that both equal the
semidirect product of the Weyl group with the Dynkin diagram automorphisms.
"""

from .automorphisms import (
    TheoremCertificate,
    chamber_stabilizer,
    component_group,
    factorize,
    fan_automorphism_group,
    root_system_automorphisms,
    semidirect_certificate,
)
from .dynkin import DiagramAutomorphism, as_lattice_map, diagram_automorphisms
from .fan import WeylFan, build_fan, cone_containing, facet_pairing_complete, is_smooth
from .linalg import LatticeMap, LatticeVector, apply, compose, det_exact, is_unimodular, primitive
from .rootsystem import LieType, RootSystem, cartan_matrix, coroot_count, generate_coroots
from .weyl import WeylGroup, coroot_permutation, enumerate_elements, order_schreier_sims

__version__ = "0.1.0"
