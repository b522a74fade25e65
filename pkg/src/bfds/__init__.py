"""Multi-choice Boolean finite dynamical systems with uncertain updates.

Systems pair every node with k candidate update functions and resolve each
step through a selection scheme (fixed, coordinated, individual,
semi-coordinated) and an update schedule (parallel, fixed permutation,
permutation list, arbitrary permutation, asynchronous).  Submodules:

- core:        systems, configurations, exact one-step semantics, actions
- graph:       labeled configuration graphs, frontier search
- analysis:    structural solvers (reachability, cycles, gardens, counting)
- transforms:  cross-model simulations with verified embeddings
- reductions:  SAT / graph-isomorphism gadget generators and harness
- permsolve:   robustness tests and permutation-existence algorithms
- fileformat:  system / instance / CNF / graph / embedding text formats
- cli:         the `bfds` command
"""

from .core import (Action, ArbitraryPermutation, Asynchronous, BfdsError,
                   Coordinated, EnumerationTooLargeError, Fixed,
                   FixedPermutation, Individual, ModelMismatchError,
                   NodeFunction, Parallel, PermutationList,
                   ResourceBudgetError, SelectionError, SemiCoordinated,
                   StructureError, System, and_, config_bits,
                   config_from_bits, config_from_str, config_to_str, const,
                   enumerate_actions, execute, neg, or_, pos, step_async,
                   step_parallel, step_sequential, successor_arcs,
                   successor_set, successors, table)
from .graph import ConfigGraph, build_graph, edge_exists, reachable_set
from .transforms import Embedding, verify_embedding
from .reductions import CnfFormula, ReductionInstance

__all__ = [name for name in dir() if not name.startswith("_")]
