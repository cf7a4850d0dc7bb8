"""Independent symbolic cross-check oracle.

Recomputes, by brute-force computer algebra on a completely separate
code path (sympy instead of the exact-fraction engine), a collection of
quantities that the main package derives through its own pipelines:
projector-series matrices via an eigenbasis recursion, recursion
invariants via direct residue evaluation, determinant expansions, exact
path integrals, and residue sums.  The results are frozen as golden
fixture files consumed by the main package's test suite.  The only
shared surface is the JSON wire format of the instance files and the
fixture schema; this package never imports the main package.
"""

__version__ = "0.1.0"
