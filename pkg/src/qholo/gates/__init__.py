from .blockade import blockade_shift_hydrogenlike
from .cavity import AdiabaticDriveWarning, DriveAmplitude, cavity_drive_amplitude
from .cphase import (CPhaseParams, cavity_lowering, cavity_photon_number, cphase_dark_state,
                     cphase_hamiltonian, cphase_phase_analytic, h_cphase, ideal_cphase,
                     logical_embedding, sector_basis, two_qubit_basis, two_qubit_hamiltonian)
from .holonomy import HolonomyResult, path_ordered_exp
from .phase import (PhaseGateParams, berry_phase_analytic, h_phase, phase_basis,
                    phase_dark_state, phase_hamiltonian)
from .pump import PumpParams, h_pump, pump_basis, pump_hamiltonian, pump_populations
from .yrot import (YRotParams, h_yrot, wilson_closed_form, wilson_loop, yrot_angle_analytic,
                   yrot_basis, yrot_connection, yrot_dark_states, yrot_hamiltonian,
                   yrot_target_state)
