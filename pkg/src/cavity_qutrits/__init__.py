"""Two-qutrit entanglement by dispersive cavity-assisted collisions.

Simulation and analysis of two three-level Rydberg atoms that become
maximally entangled while crossing a detuned, virtually excited cavity.
"""

from .analysis import (
    SweepRow,
    detuning_sweep,
    fock_convergence,
    kappa_sweep,
    physical_report,
    timing_sweep,
)
from .dynamics import (
    StepControl,
    evolve_eff_analytic,
    evolve_exact,
    evolve_lindblad,
    evolve_timedep,
)
from .hamiltonians import (
    PhysParams,
    collapse_ops,
    h_eff_field,
    h_eff_vac,
    h_interaction_picture,
    h_static_frame,
)
from .hilbert import BasisLabel, SpaceSpec, basis_state, field_op, sigma
from .measures import (
    entanglement_entropy,
    eq11_fidelity,
    fidelity,
    fidelity_mixed,
    schmidt_coefficients,
)
from .protocol import (
    ProtocolConfig,
    ProtocolResult,
    PulseSpec,
    bell_state,
    calibrate_local_phases,
    inject_timing_error,
    paper_state,
    rotation_unitary,
    run_protocol,
)

__version__ = "0.1.0"
