"""Exact arithmetic in imaginary quadratic fields: elements, ideals, class groups."""

from .quadfield import Field, FieldElement, SplittingType, make_field, field_from_disc, splitting_type
from .classgroup import ClassGroup, FormClass, QuadraticForm, enumerate_reduced
from .ideals import FractionalIdeal, ideal_from_generators, ideal_to_form_class

__all__ = [
    'Field', 'FieldElement', 'SplittingType', 'make_field', 'field_from_disc', 'splitting_type',
    'ClassGroup', 'FormClass', 'QuadraticForm', 'enumerate_reduced',
    'FractionalIdeal', 'ideal_from_generators', 'ideal_to_form_class',
]
