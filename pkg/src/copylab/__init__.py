"""copylab: a desk-scale laboratory for subgraph-count anticoncentration.

Subpackages and modules:

- ``graphs``: G(n,p) sampling and exact labelled-copy counting kernels.
- ``colour``: coloured/shaded multigraph systems, their validation,
  realization, shade-indexed copy tables, and the W-set decomposition.
- ``cores``: the exact-rational calculus of bounded cores, edge-direction
  tables, downward trees, and span certificates.
- ``probe``: the statistical harness (small-ball estimates, lattice counts,
  exact expectation tables, concentration and scaling probes).
- ``experiments`` / ``cli``: the batch experiment driver behind the ``lab``
  command.
"""

__version__ = "0.1.0"
