from hblm.services.enumeration import EnumerationService
from hblm.services.verification import VerificationService
from hblm.services.atlas import AtlasService

__all__ = [
    "EnumerationService",
    "VerificationService",
    "AtlasService",
]
