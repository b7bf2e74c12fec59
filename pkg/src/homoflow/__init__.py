"""Scale-invariant steady Navier-Stokes flows on R^n \\ {0}.

Fields u with u(lambda x) = u(x)/lambda are determined by their restriction
to the unit sphere.  This package constructs the known families (the 3D
axisymmetric jets, the 2D zero-flux profiles on the circle), solves the
reduced equations on the sphere numerically, and verifies everything with
independent finite-difference residual checks in Cartesian coordinates.
"""

__version__ = "0.1.0"

from . import elliptic, hamel, landau, oracle, solutions, sphere

__all__ = ["elliptic", "hamel", "landau", "oracle", "solutions", "sphere",
           "__version__"]
