"""Line-source diffraction by a perfectly conducting half-plane in a bi-isotropic medium."""
from .estimator import HalfPlaneDiffraction
from .exceptions import *  # noqa: F401,F403
from .farfield import FarFieldCut, FieldGrid, diffraction_coefficient, far_field, field_map, q2_pipeline, total_field
from .incident import SourceSpec, incident_exact, incident_far, incident_spectral, source_spec
from .kernel import FactorizedKernel, KernelSpec, factorize, kernel_L
from .medium import (MediumParams, DerivedMedium, PropagationContext, derive_medium, propagation_context,
                     propagation_context_from_gammas)
from .solver import (SpectralSolution, pole_contribution, scattered_field, solve, spectral_G, spectral_unknowns,
                     transverse_components)
from .verify import ResidualReport

__version__ = "0.1.0"
