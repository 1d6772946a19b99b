"""Elementary algebraic sets, Zariski closures and reflection to subgroups, computed exactly."""

from .abelian import FgAbelianGroup, GroupError, SubgroupCoordinates, subgroup_coordinates
from .closed_sets import (
    EMPTY,
    FULL,
    Atom,
    CanonicalClosed,
    Intersection,
    Union_,
    closure_finite_set,
    contains,
    denote,
    intersection,
    normalize,
    reflection_check,
    union,
)
from .club import diagonal_intersection, is_phi_invariant, naive_saturation, phi_closure
from .constructions import product_lemma_construct, semidirect_involution
from .cover import CoverCertificate, search_min_cover, singleton_certificate, verify_discreteness_cover
from .direct_sum import NATURALS, DirectSumGroup, direct_sum
from .equations import (
    ElementaryEquation,
    EquationSyntaxError,
    LinearCongruence,
    SolutionSet,
    abelian_reduce,
    parse_equation,
    print_equation,
    solve_bruteforce,
    solve_linear,
)
from .groups import FiniteGroup, cyclic, dihedral, direct_product, quaternion, symmetric
from .reflection import ReflectionTrace, reflection_construct, verify_witnesses
from .specfile import build_group, resolve_subgroup
from .subgroups import SubgroupHandle, center, centralizer, is_normal, is_super_normal, subgroup_generated

__all__ = [name for name in dir() if not name.startswith("_")]
