"""Hausdorff dimension of continued-fraction digit-growth sets.

Modules: ``cf`` (continuants, cylinders), ``growth`` (growth functions and the
emptiness test), ``pressure`` (finite-alphabet pressure roots), ``classify``
(set classification), ``cantor`` (finite Cantor subsets of E(A1, A2)),
``covering`` (empirical estimates) and ``cli``.
"""

__version__ = "0.1.0"
