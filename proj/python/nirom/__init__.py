"""Reduced-order forecasting from snapshot data."""

from ._core import (
    DegenerateError,
    GprModel,
    HorizonError,
    InputError,
    Kernel,
    NiromError,
    NumericalError,
    PodBasis,
    RomForecast,
    RomModel,
    SnapshotSet,
    SpatialGrid,
    bubble_snapshots,
    build,
    burgers_field,
    burgers_snapshots,
    correlation_matrix,
    forecast,
    inner_product,
    load_model,
    load_snapshots,
    mls_fit,
    nlml,
    pod,
    pod_horizon,
    relative_error,
    rrms_error,
    save_model,
    write_dataset,
)

__version__ = "0.1.0"
