"""T-product tensor algebra, spectral calculus, norm inequalities and bounds."""

from .errors import (
    DomainError,
    NumericError,
    ParameterError,
    PreconditionError,
    ResourceError,
    ShapeError,
)
from .major import SpectrumVec, majorizes
from .norms import GaugeSpec, gauge_norm, holder_gauge_check, unitary_invariance_check
from .rand_t import Envelope, RandomModel, calibrate_envelope, sample_tensor
from .report import CheckReport
from .spectral import (
    BlockSpectrum,
    FnSpec,
    Loewner,
    TEigenSystem,
    det,
    from_spectrum,
    loewner_cmp,
    spectral_trace,
    sym_factorize,
    t_eigenvalues,
    t_singular_values,
    tensor_fn,
    to_spectrum,
    trace,
)
from .tcore import (
    TTensor,
    bcirc,
    bcirc_inverse,
    fold,
    htranspose,
    identity,
    inner,
    load_ttj,
    save_ttj,
    tprod,
    transpose,
    unfold,
    zeros,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSpectrum", "CheckReport", "DomainError", "Envelope", "FnSpec",
    "GaugeSpec", "Loewner", "NumericError", "ParameterError",
    "PreconditionError", "RandomModel", "ResourceError", "ShapeError",
    "SpectrumVec", "TEigenSystem", "TTensor", "bcirc", "bcirc_inverse",
    "calibrate_envelope", "det", "fold", "from_spectrum", "gauge_norm",
    "holder_gauge_check", "htranspose", "identity", "inner", "load_ttj",
    "loewner_cmp", "majorizes", "sample_tensor", "save_ttj", "spectral_trace",
    "sym_factorize", "t_eigenvalues", "t_singular_values", "tensor_fn",
    "to_spectrum", "tprod", "trace", "transpose", "unfold",
    "unitary_invariance_check", "zeros",
]
