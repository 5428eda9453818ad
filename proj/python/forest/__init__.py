"""Cell complexes of colored graphs: enumeration, exact integral homology,
the theta counting map, and verification suites for the underlying
combinatorics and group presentations."""

try:
    from . import _forest as _impl  # packaged layout: the extension lives inside the package
except ImportError:  # in-tree layout: the extension sits on sys.path next to the build tree
    import _forest as _impl

Automorphism = _impl.Automorphism
BudgetExceeded = _impl.BudgetExceeded
ColoredGraph = _impl.ColoredGraph
boundary_chain = _impl.boundary_chain
enumerate_cells = _impl.enumerate_cells
homology = _impl.homology
reduce = _impl.reduce
theta = _impl.theta
theta_of_chain = _impl.theta_of_chain
verify_lemmas = _impl.verify_lemmas
verify_stn_presentation = _impl.verify_stn_presentation
verify_w_presentation = _impl.verify_w_presentation
verify_w_realizations = _impl.verify_w_realizations

__all__ = [
    "Automorphism",
    "BudgetExceeded",
    "ColoredGraph",
    "boundary_chain",
    "enumerate_cells",
    "homology",
    "reduce",
    "theta",
    "theta_of_chain",
    "verify_lemmas",
    "verify_stn_presentation",
    "verify_w_presentation",
    "verify_w_realizations",
]

__version__ = "0.1.0"
