"""Zigzag persistent homology of layer-indexed point clouds.

The package tracks how topological features of a point cloud appear,
survive, and vanish as the cloud moves through the layers of a model:
per-layer neighbor graphs become clique complexes, adjacent complexes are
tied together through their intersections, and the resulting alternating
sequence is decomposed into birth-death intervals. Per-layer descriptors
and layer-pruning recommendations are derived from those intervals.
"""

from .complexes import (
    DEFAULT_SIMPLEX_BUDGET,
    FlagComplex,
    Simplex,
    boundary_matrix,
    expand,
    intersect,
)
from .descriptors import (
    DescriptorConfig,
    DescriptorSeries,
    betti_curve,
    births_relative_frequency,
    epi_difference,
    grid_csv,
    interlayer_persistence,
    read_series_csv,
    series_csv,
    subset_stats,
    variance_scaling_fit,
    weighted_interlayer,
    weighted_interlayer_series,
    write_grid_csv,
    write_series_csv,
)
from .errors import (
    CalibrationError,
    FiltrationOrderError,
    SimplexBudgetError,
    StackFormatError,
    StackValidationError,
    ZZTError,
)
from .layerstack import (
    LayerStack,
    SubsetPartition,
    make_partition,
    partition_subsets,
    read_layerstack,
    write_layerstack,
)
from .neighbors import (
    NeighborGraph,
    VRCalibration,
    calibrate_radius,
    connected_components,
    filter_short_edges,
    knn_graph,
)
from .oracle import OracleReport, betti, induced_map_rank, verify_diagram
from .pipeline import (
    PipelineConfig,
    RunResult,
    ZigzagPersistence,
    run,
    scan_k,
    subset_diagram,
)
from .pruning import PruneReport, prune_layers, sliding_windows
from .synth import KINDS, SynthSpec, generate
from .zigzag import (
    EffectiveDiagram,
    EffectiveImage,
    Event,
    PersistenceDiagram,
    ZigzagFiltration,
    build_filtration,
    compute_zigzag,
    effective_image,
    snapshots,
    to_effective,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "DEFAULT_SIMPLEX_BUDGET",
    "DescriptorConfig",
    "DescriptorSeries",
    "EffectiveDiagram",
    "EffectiveImage",
    "Event",
    "FiltrationOrderError",
    "FlagComplex",
    "KINDS",
    "LayerStack",
    "NeighborGraph",
    "OracleReport",
    "PersistenceDiagram",
    "PipelineConfig",
    "PruneReport",
    "RunResult",
    "Simplex",
    "SimplexBudgetError",
    "StackFormatError",
    "StackValidationError",
    "SubsetPartition",
    "SynthSpec",
    "VRCalibration",
    "ZigzagFiltration",
    "ZigzagPersistence",
    "ZZTError",
    "betti",
    "betti_curve",
    "births_relative_frequency",
    "boundary_matrix",
    "build_filtration",
    "calibrate_radius",
    "compute_zigzag",
    "connected_components",
    "effective_image",
    "epi_difference",
    "expand",
    "filter_short_edges",
    "generate",
    "grid_csv",
    "induced_map_rank",
    "interlayer_persistence",
    "intersect",
    "knn_graph",
    "make_partition",
    "partition_subsets",
    "prune_layers",
    "read_layerstack",
    "read_series_csv",
    "run",
    "scan_k",
    "series_csv",
    "sliding_windows",
    "snapshots",
    "subset_diagram",
    "subset_stats",
    "to_effective",
    "variance_scaling_fit",
    "verify_diagram",
    "weighted_interlayer",
    "weighted_interlayer_series",
    "write_grid_csv",
    "write_layerstack",
    "write_series_csv",
    "__version__",
]
