"""Weyl transforms of measures on phase space, in a truncated Hermite basis."""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError, ConfigError, DimensionError, NearCriticalError, NumericalError,
    QuadratureError, RankDeficientError, WeylMeasureError,
)
from .phase_space import (
    HeisenbergElement, PhasePoint, group_inverse, group_mul, symplectic_phase,
)
from .hermite import (
    ORDERING_VERSION, BasisTruncation, OperatorMatrix, gauss_hermite, hermite_fn,
    hermite_functions, rho_matrix, rho_matrix_1d,
)
from .measures import (
    BumpDensity, ConstantDensity, Dirac, Measure, PolynomialDensity, Reflect, Smooth,
    SmoothMeasureSpec, TConv, WeightedSum, catalog_measure, chart_quadrature, circle_measure,
    curve_catalog, measure_integral, reflect_measure, total_mass,
)
from .weyl import (
    SpectrumReport, adjoint, compactness_scan, quantum_translate, singular_values, weyl_matrix,
)
from .twisted import (
    CurvePairDensity, PhaseChain, critical_set_area, pairing_oracle, phase_phi_k,
    tconv_density, tconv_weyl_direct,
)
from .geometry import (
    finite_type_order, greedy_spanning_points, hyperplane_containment, tangent_span_check,
)
