"""seqdesign: sequential conditional generation of parametric engineering
designs from small reference sets, with accuracy and diversity evaluation."""

__version__ = "0.1.0"

from .data import (  # noqa: F401
    Dataset,
    DatasetSchema,
    NormalizationState,
    denormalize,
    load_tabular,
    normalize,
    split_reference_test,
)
from .generator import (  # noqa: F401
    GenerationResult,
    GenerationTask,
    OrderPolicy,
    generate,
    inpaint,
    resolve_order,
)
from .metrics import (  # noqa: F401
    HistogramPair,
    MmdConfig,
    PrdCurve,
    build_state_space,
    mae,
    mape,
    mmd_squared,
    prd_curve,
    r_squared,
)
from .regressor import (  # noqa: F401
    FittedRegressor,
    PredictedDistribution,
    RegressorSpec,
    fit,
)
