"""Multiple polylogarithms at roots of unity: values, regularised values and Laurent-type expansions."""

from .cyclo import CycloNumber, RootOfUnity, make_root, parse_root
from .domains import IndexProfile, polar_hyperplanes
from .specialseq import PoleError

__version__ = "0.1.0"

__all__ = [
    "CycloNumber",
    "IndexProfile",
    "PoleError",
    "RootOfUnity",
    "make_root",
    "parse_root",
    "polar_hyperplanes",
    "__version__",
]
