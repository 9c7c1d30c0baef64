"""jetdiff: exact computations with invariant jet differentials on hypersurfaces.

Subpackages cover sparse exact polynomial arithmetic (poly), the algebra of
reparametrization-invariant jet polynomials (jets), Schur filtrations of the
jet bundles (filtration), Chern data and Euler-characteristic closed forms
(chern, chi), asymptotic coefficient extraction and the h^2 bound
(asymptotics), degree-threshold certificates (thresholds), and meromorphic
vector fields on vertical jet spaces of universal hypersurfaces (fields).
"""

ENGINE_VERSION = "1"

__version__ = "0.1.0"
