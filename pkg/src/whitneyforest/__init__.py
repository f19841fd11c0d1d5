"""Tree groups, the eta maps into D_n, and the invariants of twisted Whitney
towers computed from intersection forests, all in exact integer arithmetic."""

from .trees import (CanonicalTree, InfTree, canonicalize, enumerate_generators, inner_product,
                    parse_generator, parse_rooted, parse_unrooted, rooted_product)
from .lie import (LieElement, TensorElement, bracket_map, dn_lattice, dn_membership, hall_basis,
                  lie_bracket, rooted_to_lie, witt_rank)
from .tree_groups import (GroupStructure, Presentation, formal_sum, framed_presentation, reduce,
                          structure, twisted_presentation)
from .eta import audit_well_defined, eta_inf, eta_matrix, eta_tree, ker_eta
from .invariants import (IntersectionForest, arf_value, linking_data, milnor, parse_forest,
                         realize_recipe, tau)

__version__ = "0.1.0"
