"""polystrata: exact computations with the combinatorics that stratify
moduli of polarized degenerations.

Subpackages by theme:

* :mod:`polystrata.linalg` - integer/rational linear algebra, Smith normal
  form, lattice saturation
* :mod:`polystrata.lp` - exact simplex feasibility with certificates
* :mod:`polystrata.hull` - exact convex hulls and lower envelopes
* :mod:`polystrata.polytopes` - lattice polytopes and point configurations
* :mod:`polystrata.matroids` - rank functions, matroid polytopes,
  unimodular systems
* :mod:`polystrata.complexes` - polytopal complexes and gluing cohomology
* :mod:`polystrata.subdivisions` - regular subdivisions, GKZ vectors,
  secondary polytopes
* :mod:`polystrata.periodic` - periodic (semi-)Delaunay decompositions,
  Voronoi cones, hyperplane and cographic subdivisions
* :mod:`polystrata.cli` - the batch JSON command-line front end
"""

__version__ = "0.1.0"

from .errors import DivergenceError, InputError, PolystrataError, SizeLimitError

__all__ = [
    "DivergenceError",
    "InputError",
    "PolystrataError",
    "SizeLimitError",
    "__version__",
]
