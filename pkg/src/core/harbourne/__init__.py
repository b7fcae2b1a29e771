from . import certificates, criteria, exactnum, geometry, incidence, tspace
from .certificates import builtin_certificates
from .criteria import Mode, apply_all
from .errors import HarbourneError
from .geometry import realize_over_prime_field, verify_certificate
from .incidence import feasible_arrangement
from .tspace import TVector, combinatorial_quotient, enumerate_tvectors

__all__ = [
    "certificates",
    "criteria",
    "exactnum",
    "geometry",
    "incidence",
    "tspace",
    "HarbourneError",
    "Mode",
    "TVector",
    "apply_all",
    "builtin_certificates",
    "combinatorial_quotient",
    "enumerate_tvectors",
    "feasible_arrangement",
    "realize_over_prime_field",
    "verify_certificate",
]
