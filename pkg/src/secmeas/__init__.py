"""Secondary-measure chains of classical orthogonal polynomial families."""

from .errors import (
    CapabilityMissing,
    ChainZeroDivision,
    DegenerateDenominator,
    EigenFailure,
    GridTooLarge,
    IndexOutOfRange,
    NodeCollision,
    NonFinite,
    OnSupport,
    OutOfDomain,
    SecmeasError,
    UnknownCheck,
    UnknownFamily,
)
from .fourier import (
    FourierReport,
    eigen_product,
    fourier_direct,
    fourier_multiint,
    generating_function_check,
    isometry_check,
)
from .measures import (
    BUILTIN_FAMILIES,
    MeasureFamily,
    d0,
    eval_reducer,
    eval_stieltjes,
    get_family,
    load_family_file,
    moment,
)
from .orthosys import OrthoSystem, apply_T_poly, generate, orthonormality_check
from .poly import Polynomial, divided_difference, newton_quotient
from .quad import (
    IntegrationResult,
    QuadratureRule,
    Support,
    gauss_rule,
    integrate,
    tensor_integrate,
)
from .secondary_chain import (
    SecondaryChain,
    associated_system,
    build_chain,
    continued_fraction_eval,
    density,
    pade_check,
    reducer,
    stieltjes,
)
from .verify import CheckResult, run_check, run_suite

__version__ = "0.1.0"
