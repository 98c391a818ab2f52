"""bondscope: topological classification and comparison of bond networks.

Local atomic environments are classified by coordination profile, primitive
ring profile, H1 barcode, or rooted canonical graph form; the resulting
empirical distributions are compared via scaled Shannon entropy, mutual
information / uncertainty coefficients, and symmetrized KL divergence.
"""

__version__ = "0.1.0"

from .barcode import (
    Barcode,
    InconsistentFMatrixError,
    NotPerfectlyCoordinatedError,
    endpoints_from_shell_count,
    f_matrix,
    format_barcode,
    h1_barcode,
    mobius_invert,
    shell_count_from_endpoints,
)
from .canonical import EnvironmentTooLargeError, canonical_form, primitive_cluster
from .crystals import generate_cristobalite, generate_quartz, generate_tridymite
from .descriptors import (
    ALL_TAGS,
    CoordinationProfile,
    DescriptorKey,
    ShellCount,
    coordination_profile,
    describe,
    render_key,
    shell_count,
)
from .ingest import (
    AtomicConfiguration,
    BondRule,
    ParseError,
    build_bond_network,
    cutoff_stability,
    detect_and_parse,
    network_from_json,
    network_to_json,
    parse_lammps_dump,
    parse_xyz,
    write_xyz,
)
from .network import (
    BondNetwork,
    LocalEnvironment,
    ShellAnnulus,
    bfs_distances,
    connected_components,
    extract_environment,
    h1_rank,
    perfect_coordination_check,
    shell_annulus,
)
from .perturb import rewire_bonds
from .rings import PrimitiveRingProfile, format_ring_profile, primitive_rings_through
from .stats import (
    BoundaryTruncationWarning,
    ComparisonReport,
    EmpiricalDistribution,
    JointDistribution,
    UndefinedUncertaintyError,
    classify_all,
    classify_joint,
    distribution_from_json,
    distribution_to_json,
    frequency_standard_error,
    mutual_information,
    ranked_diff_table,
    scaled_entropy,
    shannon_entropy,
    symmetrized_kl,
    uncertainty_coefficient,
)
