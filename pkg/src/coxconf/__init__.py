"""Cox configurations: construction, axiom checks, symmetry groups and exact circle realizations."""

from .axioms import check_condition, check_miquel, enumerate_miquel_instances, is_weak_chain_structure
from .builders import (cox, decompose, disjoint_blocks, gras2cox, grassmannian, hypercube, k_dagger,
                       levi_graph, max_cliques_grassmann, miquel_substructure, residual_at_point,
                       steiner_miquel_labels)
from .core import (ConfigSignature, FiniteSubset, IncidenceStructure, closure, dual, find_isomorphism,
                   is_closed_substructure, signature)
from .realization import (INFINITY, InvCircle, InvPoint, Realization, circle_through, cross_ratio,
                          extend, realize, second_intersection, stereographic, verify)
from .symmetry import CoxMap, apply, brute_force_automorphisms, brute_force_correlations, compose, \
    flag_orbit, full_group, stabilizer_of_empty

__version__ = "0.1.0"
