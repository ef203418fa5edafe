""" linres: resolution over linear equations modulo a prime p >= 5 """

from linres.errors import LinresError
from linres.gf import AffinePoly, AffineSpan, Field, FMatrix, PartialAssignment
from linres.instances import EccInstance, LinearSystem, gen_instance
from linres.verdict import Verdict

__version__ = "0.1.0"

__all__ = [
    "AffinePoly",
    "AffineSpan",
    "EccInstance",
    "FMatrix",
    "Field",
    "LinearSystem",
    "LinresError",
    "PartialAssignment",
    "Verdict",
    "gen_instance",
]
