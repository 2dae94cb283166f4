"""Discrete potential theory on weighted graphs.

Capacities, killed Green operators, harmonic measure, exact Harnack
constants, adjusted-Poincare constants, cut-off inequality checks, a Monte
Carlo oracle for the continuous-time chain, and conductance-perturbation
stability experiments.
"""

from .cable import Subdivision, lift_region, subdivide
from .errors import NumericalError, ValidationError
from .generators import PerturbationSpec, lattice_box, path_graph, perturb, sierpinski_gasket
from .graphs import (AuditRow, Region, ScaleRecord, WeightedGraph,
                     audit_regularity, ball, build_graph, covering_number,
                     format_edgelist, parse_edgelist, read_edgelist,
                     region_from_set, volume, write_edgelist)
from .inequalities import (Certificate, CertifyBounds, CoiResult, CutoffFunction,
                           HarnackReport, PoincareResult, annulus_harnack,
                           annulus_harnack_reports, build_cutoff, certify,
                           coi_check, harnack_constant, poincare_constant)
from .laplace import (GreenKernel, Potential, dirichlet_solve, exit_kernel,
                      green_killed, harmonic_measure, killed_resolvent_column,
                      mean_exit_time, neumann_energy, neumann_resolvent,
                      restricted_energy)
from .mc import ExitSample, simulate_exit
from .potential import (CapacityResult, capacity, capacity_sweep,
                        equilibrium_flux, global_capacity, killed_capacity,
                        killed_scale, occupation_time, scale_profile)
from .stability import StabilityReport, run_stability

__all__ = [name for name in dir() if not name.startswith("_")]
