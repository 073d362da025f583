"""Exact m-eternal domination solving on cactus graphs.

The package has three layers:

* ``multigraph`` / ``blockcut`` -- the game board: undirected multigraphs,
  cactus detection, block-cut decomposition, leaf components, vertex colors
  and the lower-bound surgeries (vertex identification, clique reduction,
  attack-sequence certificates).
* ``oracle`` -- exact game values on small arbitrary graphs by greatest
  fixpoint elimination over guard configurations; the ground truth used by
  every test.
* ``strategy`` / ``synthesis`` / ``reducer`` -- labelled defending
  strategies, the combinators that transform them, the reduction engine that
  computes the guard number of a cactus, and the reverse replay that turns a
  reduction trace into a machine-checkable strategy certificate.
"""

from .multigraph import Multigraph, parse_graph, format_graph, is_cactus
from .oracle import GameMode, exact_number, domination_number
from .reducer import reduce_to_base, solve_number, synthesize, trace_exemptions

__version__ = "0.1.0"

__all__ = [
    "Multigraph",
    "parse_graph",
    "format_graph",
    "is_cactus",
    "GameMode",
    "exact_number",
    "domination_number",
    "reduce_to_base",
    "solve_number",
    "synthesize",
    "trace_exemptions",
]
