"""wptsheet: design automation and simulation for cuttable, recyclable
liquid-metal wireless-power-transfer sheets."""

from .calibration import Calibration, default_calibration, load_calibration
from .cuts import CutReport, CutScenario, apply_cuts, sealing_manifest
from .em import (CouplingReport, ElectricalReport, coil_inductance, coil_resistance,
                 link_efficiency, q_factor, skin_depth, stray_capacitance)
from .errors import DomainError, ValidationError
from .htree import RoutingTree, build_htree, feed_resistance, path_to_leaf, tree_for_spec
from .mech import (MechReport, bending_stiffness, cutting_force, feasible_window,
                   injectable, leak_on_cut, mech_report)
from .model import (ChannelXSection, CoilSpec, MaterialDb, RecycleLedger, SheetSpec,
                    coil_conductor_length, recycle_project, validate_sheet)
from .mutual import mutual_fixed, mutual_inductance
from .protocol import (CoverageField, Policy, RxDevice, SimTrace, coverage_map,
                       instantaneous_state, make_policy, make_rx, run_sim)
from .sweep import DesignSelection, SweepRow, calibrate, select_design, sweep_thickness

__version__ = "0.1.0"
