"""Nonnegative manifold disentangling toolkit.

Solvers and analysis tools for the trace-objective SDP
max tr(D Q) s.t. Q 1 = 1, tr Q = K, Q psd, Q >= 0,
a convex relaxation of K-means whose solutions double as learned
manifold kernels.
"""

from .bm import BmConfig, BmReport, bm_lagrangian, solve_nomad_bm
from .cgm import (
    CgmConfig,
    CgmState,
    SdpProblem,
    SolveReport,
    cgm_generic_step,
    duality_gap,
    grad_g,
    solve_nomad_cgm,
)
from .datasets import (
    Dataset,
    add_noise_dims,
    double_swiss_roll,
    gaussian_blobs,
    grid2d_in_10d,
    load_csv,
    moons,
    ring,
    save_csv,
    trefoil_knot,
    two_rings,
)
from .linalg import (
    EigPair,
    SymMatrix,
    gramian,
    lanczos_extreme,
    min_eigenvalue,
    neg_half_sqdist,
    project_out_ones,
)
from .manifold import (
    BullseyeReport,
    EmbeddingResult,
    bullseye_score,
    geodesic_ranking,
    lloyd_kmeans,
    manifold_components,
    multilayer_nomad,
    partition_to_Q,
    similarity_to_distance,
    spectral_embedding,
)
from .rings import (
    FourierProfile,
    active_mode_count,
    cone_geometry_check,
    cp_diagnostics,
    fourier_profile,
    lp_feasibility_check,
    neighborhood_width,
)
from .snmf import SnmfConfig, SnmfResult, cp_rank_sweep, snmf

__version__ = "0.1.0"
