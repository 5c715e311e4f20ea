"""Rotational invariance, spin coupling and permutation statistics of
two-level multi-particle spin states."""

__version__ = "0.1.0"

from .hilbert import (
    Ket,
    Operator,
    apply,
    basis_minus,
    basis_plus,
    inner,
    kron,
    norm,
    orthogonal_spinor,
    spinor,
    tensor,
)
from .spin import (
    JointDistribution,
    MeasurementAxes,
    RotationSpec,
    conditional,
    conjugate_second,
    is_isc_form,
    is_rotationally_invariant,
    make_parallel_isc,
    make_singlet,
    make_state2,
    rotation,
    spectral_probability,
)
from .coupling import (
    BellReport,
    LhvProblem,
    LhvResult,
    anticorrelated_variant,
    bell_check,
    bell_scan,
    lhv_feasibility,
    pair_disagreement,
)
from .statistics import (
    FockSpinState,
    Kind,
    Permutation,
    StatisticsLabel,
    antisymmetrize,
    classify_permutable,
    compose_statistics,
    fock_inner,
    fock_opposite,
    fock_same,
    parse_statistics,
    permutations,
    symmetrize,
    fock_antisymmetrize,
    theorem3_state,
)
from .experiments import (
    DeuteronModel,
    EnergyLevels,
    deuteron_exact,
    deuteron_simulate,
    discrimination_power,
    fermi_ground_energy,
    mgf_check,
    sample_measurements,
)
