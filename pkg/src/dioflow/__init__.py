"""Simultaneous Diophantine approximation through visits of the diagonal flow
on the space of lattices to a cross-section.

Modules: exactnum (exact reals), norms, approx (direct enumeration), lattice,
observables (projected lattice and lift), dynamics (the flow enumerator),
numfield (totally real targets), stats (reference laws), experiments, cli.
"""

from .approx import best_approximations, eps_approximations, make_target
from .dynamics import CrossSectionGeometry, visits
from .norms import parse_norm

__version__ = "0.1.0"

__all__ = ["best_approximations", "eps_approximations", "make_target", "CrossSectionGeometry", "visits", "parse_norm"]
