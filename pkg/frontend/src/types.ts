// Wire types of the wptsheet service. The UI never computes physics: every
// number it shows comes verbatim out of one of these payloads.

export type Coil = [number, number]; // [row, col]
export type PointMm = [number, number];

export interface CutReport {
  retained_outline: PointMm[];
  retained_holes: PointMm[][];
  surviving_coils: Coil[];
  severed_segments: { segment: number; point_mm: PointMm }[];
  severed_coil_channels: { coil: Coil; crossings: number }[];
  leak_risk: boolean;
  root_severed: boolean;
}

export interface CutResponse {
  report: CutReport;
  sealing_manifest: unknown[];
  scenario: CutsJson;
}

export interface CutsJson {
  cuts: PointMm[][];
}

export interface TreeNode {
  id: number;
  x_mm: number;
  y_mm: number;
}

export interface TreeSegment {
  id: number;
  a: number;
  b: number;
  level: number;
}

export interface GeometryPayload {
  sheet_half_mm: number;
  pitch_mm: number;
  coils: { coil: Coil; center_mm: PointMm; outer_side_mm: number }[];
  tree: {
    nodes: TreeNode[];
    segments: TreeSegment[];
    root: number;
    leaves: { coil: Coil; node: number }[];
  };
  report: CutReport;
  scenario: CutsJson;
  layers: Record<string, string>;
}

export interface AnalysisPayload {
  electrical: {
    r_dc: number;
    r_ac: number;
    inductance: number;
    stray_capacitance: number;
    f_self_resonance: number;
    q_factor: number;
  };
  mech: {
    bending_stiffness: number;
    cutting_force_index: number;
    injectable: boolean;
    leak_on_cut: boolean;
    feasible: boolean;
  };
  feasible_window_mm: [number, number] | null;
}

export interface SimStepPayload {
  rx: { x_mm: number; y_mm: number; height_mm: number };
  detected: Coil[];
  active: Coil[];
  power: { coil: Coil; value: number }[];
  total_power: number;
}
