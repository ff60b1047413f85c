"""Conditional covariate adjustment in DAGs, MPDAGs and PAGs."""

from .construct import (ConstructedSet, SetKind, adjust_set_mpdag, adjust_set_pag, o_set,
                        parent_adjustment)
from .criterion import (Clause, CriterionReport, ExistenceReport, Verdict, check_amenability,
                        check_applicability, check_conditional_adjustment,
                        check_conditional_backdoor, check_unconditional_adjustment,
                        exists_conditional_adjustment)
from .errors import (CadjustError, EnumerationCapError, GraphSyntaxError, GraphValidationError,
                     PreconditionError, QueryError, SingularBlockError)
from .graph import (Edge, GraphClass, Mark, MixedGraph, NodeSet, apply_meek_closure,
                    delete_edges_into, delete_edges_out_of, induced_subgraph, moral_graph,
                    parse_graph, proper_backdoor_graph, serialize_graph)
from .paths import (PathFilter, PathWitness, Status, backdoor_paths, classify_path,
                    enumerate_proper_definite_status_paths, is_blocked, is_visible, m_separated)
from .reachability import (ancestors, descendants, forbidden_set, parents, possible_ancestors,
                           possible_descendants, possible_mediators)

__version__ = "0.1.0"
