"""Hand-formula oracles: independent re-implementations of every closed form,
written straight from the physics with no imports from the package internals.
The unit tests compare package results against these to 1e-9 relative."""

import math

MU0 = 4e-7 * math.pi
EPS0 = 8.8541878128e-12
G = 9.80665


def spiral_sides_mm(outer, turns, w, s):
    return [outer - w - 2 * i * (w + s) for i in range(turns)]


def conductor_length_mm(outer, turns, w, s):
    total = 0.0
    for side in spiral_sides_mm(outer, turns, w, s):
        total += 4 * side
    return total


def skin_depth_m(rho_ohm_mm, f_hz):
    rho = rho_ohm_mm / 1000.0
    return (rho / (math.pi * f_hz * MU0)) ** 0.5


def r_dc_ohm(rho_ohm_mm, length_mm, w_mm, t_mm):
    return rho_ohm_mm * length_mm / (w_mm * t_mm)


def r_ac_ohm(rho_ohm_mm, length_mm, w_mm, t_mm, f_hz):
    d_mm = skin_depth_m(rho_ohm_mm, f_hz) * 1000.0
    core_w = w_mm - 2 * d_mm
    core_t = t_mm - 2 * d_mm
    core = (core_w if core_w > 0 else 0.0) * (core_t if core_t > 0 else 0.0)
    return rho_ohm_mm * length_mm / (w_mm * t_mm - core)


def inductance_h(outer, turns, w, s):
    d_out = outer
    d_in = outer - 2 * w - 2 * (turns - 1) * (w + s)
    rho = (d_out - d_in) / (d_out + d_in)
    d_avg_m = (d_out + d_in) / 2 / 1000.0
    return 2.34 * MU0 * turns * turns * d_avg_m / (1 + 2.75 * rho)


def stray_c_f(outer, turns, w, s, t_mm, eps_r):
    sides = spiral_sides_mm(outer, turns, w, s)
    total = 0.0
    for i in range(turns - 1):
        facing = (4 * sides[i] + 4 * sides[i + 1]) / 2.0
        total += EPS0 * eps_r * (t_mm / 1000.0) * (facing / 1000.0) / (s / 1000.0)
    return total


def f_sr_hz(l_h, c_f):
    if c_f == 0:
        return float("inf")
    return 1.0 / (2 * math.pi * (l_h * c_f) ** 0.5)


def q_factor(outer, turns, w, s, t_mm, rho_ohm_mm, eps_r, f_hz,
             loss_calibration, tan_delta):
    length = conductor_length_mm(outer, turns, w, s)
    rac = r_ac_ohm(rho_ohm_mm, length, w, t_mm, f_hz)
    l_h = inductance_h(outer, turns, w, s)
    c_f = stray_c_f(outer, turns, w, s, t_mm, eps_r)
    omega = 2 * math.pi * f_hz
    r_diel = tan_delta * omega * omega * omega * l_h * l_h * c_f
    return omega * l_h / (loss_calibration * (rac + r_diel))


def link_eta(q_tx, q_rx, k):
    x = k * k * q_tx * q_rx
    return x / (1 + (1 + x) ** 0.5) ** 2


def feed_r_ohm(rho_ohm_mm, path_mm, w_mm, t_mm, contact_ohm):
    return rho_ohm_mm * path_mm / (w_mm * t_mm) + 2 * contact_ohm


def injection_pressure_pa(gamma, w_mm, t_mm):
    return 2 * gamma * (1000.0 / w_mm + 1000.0 / t_mm)


def retention_ratio(gamma, w_mm, t_mm, rho_kg_m3):
    return injection_pressure_pa(gamma, w_mm, t_mm) / (rho_kg_m3 * G * t_mm / 1000.0)


def ei_uncal_nm2(e_pa, pitch_mm, w_mm, t_mm, s_mm, wall_mm):
    b = pitch_mm / 1000.0
    t = t_mm / 1000.0
    wall = wall_mm / 1000.0
    frac = s_mm / (w_mm + s_mm)
    skins = 2 * (b * wall ** 3 / 12 + b * wall * ((t + wall) / 2) ** 2)
    webs = frac * b * t ** 3 / 12
    return e_pa * (skins + webs)


def htree_path_mm(k, pitch_mm):
    return (2 ** k - 1) * pitch_mm


def htree_total_mm(k, pitch_mm):
    if k == 1:
        return 3 * pitch_mm
    return 4 * htree_total_mm(k - 1, pitch_mm) + 6 * 2 ** (k - 2) * pitch_mm


# ---------------------------------------------------------------------------
# Neumann filament oracle for the spiral self-inductance (secondary check).
# Spiral sides are straight filaments; pairs are either perpendicular (zero
# contribution) or parallel with the exact two-filament closed form; each side
# carries the Rosa self term with the rectangular-section GMD 0.2235*(w+t).
# ---------------------------------------------------------------------------

def _parallel_filament_m(a0, a1, b0, b1):
    ux, uy = a1[0] - a0[0], a1[1] - a0[1]
    la = math.hypot(ux, uy)
    ux, uy = ux / la, uy / la
    t0 = (b0[0] - a0[0]) * ux + (b0[1] - a0[1]) * uy
    t1 = (b1[0] - a0[0]) * ux + (b1[1] - a0[1]) * uy
    sign = 1.0
    if t1 < t0:
        t0, t1, sign = t1, t0, -1.0
    # perpendicular offset of filament b from the line of a
    off_x = (b0[0] - a0[0]) - ((b0[0] - a0[0]) * ux + (b0[1] - a0[1]) * uy) * ux
    off_y = (b0[1] - a0[1]) - ((b0[0] - a0[0]) * ux + (b0[1] - a0[1]) * uy) * uy
    d = math.hypot(off_x, off_y)

    def g(x):
        if d < 1e-12:
            return x * math.log(abs(x)) - abs(x) if abs(x) > 1e-15 else 0.0
        return x * math.asinh(x / d) - math.hypot(x, d)

    val = g(la - t0) - g(la - t1) - g(0.0 - t0) + g(0.0 - t1)
    return sign * MU0 / (4 * math.pi) * val / 1000.0  # mm -> m


def neumann_self_inductance_h(outer, turns, w, s, t_mm):
    sides = spiral_sides_mm(outer, turns, w, s)
    segs = []
    for side in sides:
        h = side / 2
        c = [(-h, -h), (h, -h), (h, h), (-h, h)]
        for j in range(4):
            segs.append((c[j], c[(j + 1) % 4]))
    total = 0.0
    for i, (p0, p1) in enumerate(segs):
        for j, (q0, q1) in enumerate(segs):
            if i == j:
                continue
            di = (p1[0] - p0[0], p1[1] - p0[1])
            dj = (q1[0] - q0[0], q1[1] - q0[1])
            if abs(di[0] * dj[0] + di[1] * dj[1]) < 1e-12:
                continue
            total += _parallel_filament_m(p0, p1, q0, q1)
    gmd_m = 0.2235 * (w + t_mm) / 1000.0
    for (p0, p1) in segs:
        length_m = math.hypot(p1[0] - p0[0], p1[1] - p0[1]) / 1000.0
        total += MU0 / (2 * math.pi) * length_m * (
            math.log(2 * length_m / gmd_m) - 1.0 + gmd_m / length_m)
    return total
