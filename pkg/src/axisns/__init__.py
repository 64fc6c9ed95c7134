"""Axisymmetric swirling Navier-Stokes solver with criticality diagnostics and an inequality lab.

The package root stays import-light so that the thread-count variable can be
applied before numpy loads; import submodules directly.
"""

__version__ = "0.1.0"
