"""Numerical laboratory for the Lefschetz formula on PSL2(Z)\\H."""

from .geodesics import (
    GeodesicClass,
    PrimitiveFamily,
    SpectrumCache,
    enumerate_classes,
    enumerate_primitive_families,
    h_index,
    local_lefschetz,
)
from .lefschetz import (
    class_number_form,
    contour_side,
    geometric_side,
    psi_counting,
    residue_side,
    verification_report,
)
from .mellin import (
    GenericTestFunction,
    ReferenceTestFunction,
    class_membership,
    evaluate,
    inverse_mellin,
)
from .quadform import (
    DiscriminantRecord,
    InvalidDiscriminant,
    QuadraticForm,
    discriminant_record,
    fundamental_unit,
    narrow_class_number,
    oracle_class_count,
    pell4_fundamental,
    valid_discriminants,
)
from .selberg import ZeroDatum, load_zero_data, log_zeta, zeta_logderiv

# the Mellin transform itself stays at selberglab.mellin.mellin so that the
# submodule name is not shadowed

__version__ = "0.1.0"
