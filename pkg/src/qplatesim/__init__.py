"""Vector paraxial propagation through azimuthally patterned uniaxial plates."""

from ._direct import BACKEND
from .grid import Grid, ScalarField, VectorField, energy, make_grid, quad_integral, spectral_derivative
from .media import UniaxialMedium, homogeneous_propagator, k_ez, k_oz, propagate_homogeneous
from .modes import BeamSpec, JonesVector, LGIndex, lg_mode, make_input_field, spin_degree
from .observables import (
    AMDelta,
    AMReport,
    DeltaPrediction,
    am_budget,
    am_report,
    closed_form,
    delta_L_closed,
    delta_S_closed,
    orbital_am,
    spin_am,
)
from .qplate import (
    KernelMode,
    QPlateSpec,
    axis_angle,
    fresnel_kernel_extraordinary,
    fresnel_kernel_ordinary,
    local_flip_matrix,
    qplate_propagate,
    thin_element_apply,
)

__version__ = "0.1.0"
