from .dipole import (TABLE1_NS, TABLE1_ROWS, angular_factor, dipdip_element, single_atom_element,
                     spherical_component, table1)
from .hamiltonian import (RUBIDIUM, GridTooCoarseError, QuantumDefects, StarkMap, StarkModel,
                          TruncationWarning, assemble_stark_hamiltonian, defect_block,
                          linear_field_bound, outermost_state, stark_map)
from .pair import NotLinearRegimeError, PairShift, cloud_min_shift, pair_shift_outermost
from .radial import hydrogen_radial_dipole, radial_dipole_closed
from .wigner import (ForbiddenLabelWarning, ParabolicState, SphericalState, coefficient_matrix,
                     parabolic_coefficient, q_allowed, q_ladder, wigner3j)
