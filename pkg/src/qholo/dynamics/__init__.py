from .fidelity import FidelityReport, default_probes, gate_fidelity, haar_states
from .integrate import StepSizeWarning
from .lindblad import CollapseChannel, evolve_lindblad, lindblad_propagate, validate_density
from .schrodinger import (AdiabaticityReport, EvolutionRecord, NonCyclicWarning, PhaseEstimate,
                          adiabaticity_report, evolve_schrodinger, extract_geometric_phase,
                          relative_phase_series, with_diagnostics)
from .trajectories import TrajectoryEnsemble, evolve_trajectories, worker_count

__all__ = [
    "AdiabaticityReport", "CollapseChannel", "EvolutionRecord", "FidelityReport",
    "NonCyclicWarning", "PhaseEstimate", "StepSizeWarning", "TrajectoryEnsemble",
    "adiabaticity_report", "default_probes", "evolve_lindblad", "evolve_schrodinger",
    "evolve_trajectories", "extract_geometric_phase", "gate_fidelity", "haar_states",
    "lindblad_propagate", "relative_phase_series", "validate_density", "with_diagnostics",
    "worker_count",
]
