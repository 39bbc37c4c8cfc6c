"""picardcusps - cusp counts of Picard modular surfaces and their one-cusped catalog."""

__version__ = "0.1.0"

from .arithmetic.quadfield import Field, make_field, field_from_disc
from .arithmetic.classgroup import ClassGroup, enumerate_reduced
from .lattices.cusp_formulas import KfConfig, CongruenceLevel, evaluate
from .catalog.scanner import CatalogScanner

__all__ = [
    'Field', 'make_field', 'field_from_disc',
    'ClassGroup', 'enumerate_reduced',
    'KfConfig', 'CongruenceLevel', 'evaluate',
    'CatalogScanner',
]
