"""Hermitian lines, the mod-p orbit oracle and closed-form cusp counts."""

from .hermitian_lines import IsotropicLine, UnitaryMatrix, find_line_with_class, gamma_std_sample
from .modp import ModPModel, Subgroup
from .cusp_formulas import KfConfig, CongruenceLevel, LocalType, evaluate

__all__ = [
    'IsotropicLine', 'UnitaryMatrix', 'find_line_with_class', 'gamma_std_sample',
    'ModPModel', 'Subgroup',
    'KfConfig', 'CongruenceLevel', 'LocalType', 'evaluate',
]
