"""Binary codes from the incidence structure of a conic in PG(2, q)."""

from .finite_field import FieldCtx, make_field
from .projective_plane import PlaneCtx, make_plane

__all__ = ["FieldCtx", "PlaneCtx", "make_field", "make_plane"]
__version__ = "0.1.0"
