"""Analytic expected per-bin return with no obstacle present.

For every range bin the expected bottom, surface and volume reverberation
levels are assembled from the propagation model, the bin geometry and the
backscatter coefficients, with the beam pattern averaged over the ensonified
ring (bottom, surface) or gated shell (volume) by numerical quadrature.

Averaging modes
---------------
"coupled" (default)
    The transmit and receive patterns are averaged as one product in linear
    intensity, normalized by the full integration measure. This is the
    expectation the Monte-Carlo ray estimator converges to, so simulated and
    expected curves are directly comparable.
"independent"
    Each pattern is averaged separately in linear intensity and the two dB
    results are added. Understates the return of directive patterns because
    the average of the product exceeds the product of averages.
"printed"
    dB-domain averages with 1/pi (ring) and 1/pi^2 (sphere) prefactors,
    retained for side-by-side study with the linear forms.

Quadrature is adaptive panel-doubling trapezoid integration, converged when
a doubling changes the result by at most 0.01 dB. Integration domains are
restricted to the closed-form gate intervals, so integrands stay smooth;
beams with nonzero yaw fall back to pointwise gating of the shell integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .acoustics import (
    BeamOrientation,
    EnvironmentParams,
    SonarConfig,
    absorption_coeff,
    beam_gain,
    max_range,
    range_resolution,
    transmission_loss,
)
from .db import NO_RESPONSE, to_db, to_linear
from .geometry import (
    BinLayout,
    SonarPose,
    beam_angles_surface,
    beam_angles_volume,
    cutoff_angle,
    grazing_between,
    ring_radius,
    rotate_to_sonar_frame,
)
from .scatter import bottom_coeff, reverb_level, surface_coeff, volume_coeff

TOLERANCE_DB = 0.01
MAX_PANELS = 2**18
# Floor for dB-domain integrands in "printed" mode, where pattern nulls
# would otherwise contribute -inf to the integral.
PRINTED_FLOOR_DB = -300.0

VALID_MODES = ("coupled", "independent", "printed")


class QuadratureError(RuntimeError):
    """Raised when panel doubling fails to converge within the panel cap."""


@dataclass(frozen=True)
class NullModelReturn:
    """Expected per-bin intensities and their components, all in dB."""

    layout: BinLayout
    pose: SonarPose
    beam: BeamOrientation
    bottom_db: np.ndarray
    surface_db: np.ndarray
    volume_db: np.ndarray

    @property
    def total_db(self) -> np.ndarray:
        """Per-bin power sum of the three components."""
        total = (
            to_linear(self.bottom_db)
            + to_linear(self.surface_db)
            + to_linear(self.volume_db)
        )
        return to_db(total)

    @property
    def bin_centers(self) -> np.ndarray:
        return self.layout.centers


def _check_mode(mode: str) -> None:
    if mode not in VALID_MODES:
        raise ValueError(f"mode must be one of {VALID_MODES}, got {mode!r}")


def _orientation(pose: SonarPose, beam: BeamOrientation) -> tuple:
    """Total (pitch, yaw) of a beam carried by the posed vehicle."""
    return pose.pitch_rad + beam.pitch_rad, beam.yaw_rad


# ---------------------------------------------------------------------------
# 1-D and tensor-grid adaptive trapezoid integration


def _trapz(values: np.ndarray, dx: float) -> float:
    return float(dx * (values.sum() - 0.5 * (values[0] + values[-1])))


def _trapz2(values: np.ndarray, dx: float, du: float) -> float:
    inner = dx * (values.sum(axis=0) - 0.5 * (values[0, :] + values[-1, :]))
    return float(du * (inner.sum() - 0.5 * (inner[0] + inner[-1])))


def _converged(previous: float, current: float, tol_db: float) -> bool:
    if previous == 0.0 and current == 0.0:
        return True
    if previous <= 0.0 or current <= 0.0:
        return False
    return abs(10.0 * math.log10(current / previous)) <= tol_db


def _converged_signed(previous: float, current: float, tol_db: float) -> bool:
    # dB-domain integrals may be negative; compare absolutely in dB units.
    return abs(current - previous) <= tol_db


def _adaptive_trapezoid(f, a: float, b: float, *, signed: bool = False) -> float:
    """Integrate vectorized f over [a, b] with panel doubling."""
    if b - a <= 0.0:
        return 0.0
    n = 16
    x = np.linspace(a, b, n + 1)
    previous = _trapz(f(x), (b - a) / n)
    check = _converged_signed if signed else _converged
    while n < MAX_PANELS:
        n *= 2
        x = np.linspace(a, b, n + 1)
        current = _trapz(f(x), (b - a) / n)
        if check(previous, current, TOLERANCE_DB):
            return current
        previous = current
    raise QuadratureError(
        f"trapezoid integration did not converge to {TOLERANCE_DB} dB "
        f"within {MAX_PANELS} panels"
    )


def _adaptive_trapezoid_2d(f, a: float, b: float, *, signed: bool = False) -> float:
    """Integrate f(x_grid, u_grid) -> matrix over [a, b] x [0, 1]."""
    if b - a <= 0.0:
        return 0.0
    n = 16
    max_side = int(math.isqrt(MAX_PANELS))
    x = np.linspace(a, b, n + 1)
    u = np.linspace(0.0, 1.0, n + 1)
    previous = _trapz2(f(x, u), (b - a) / n, 1.0 / n)
    check = _converged_signed if signed else _converged
    while n < max_side:
        n *= 2
        x = np.linspace(a, b, n + 1)
        u = np.linspace(0.0, 1.0, n + 1)
        current = _trapz2(f(x, u), (b - a) / n, 1.0 / n)
        if check(previous, current, TOLERANCE_DB):
            return current
        previous = current
    raise QuadratureError(
        f"tensor trapezoid integration did not converge to {TOLERANCE_DB} dB "
        f"within {MAX_PANELS} panels"
    )


# ---------------------------------------------------------------------------
# Closed-form gate intervals


def _arc_where_positive(a: float, b: float, c: float) -> list:
    """Intervals of theta in [-pi, pi] where a*cos + b*sin + c > 0."""
    r = math.hypot(a, b)
    if r < 1e-300:
        return [(-math.pi, math.pi)] if c > 0 else []
    t = -c / r
    if t <= -1.0:
        return [(-math.pi, math.pi)]
    if t >= 1.0:
        return []
    half_width = math.acos(t)
    phase = math.atan2(b, a)
    lo, hi = phase - half_width, phase + half_width
    intervals = []
    if lo < -math.pi:
        intervals.append((lo + 2.0 * math.pi, math.pi))
        lo = -math.pi
    if hi > math.pi:
        intervals.append((-math.pi, hi - 2.0 * math.pi))
        hi = math.pi
    intervals.append((lo, hi))
    return intervals


def _intersect_intervals(first: list, second: list) -> list:
    out = []
    for lo1, hi1 in first:
        for lo2, hi2 in second:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if hi > lo + 1e-15:
                out.append((lo, hi))
    return sorted(out)


def _ring_front_arc(rho: float, z: float, pitch: float, yaw: float) -> list:
    """theta_r intervals where the ring point lies in the beam's front
    hemisphere. The beam-frame x component of the ring vector is affine in
    (cos theta_r, sin theta_r), so the arc is closed-form."""
    a = rho * math.cos(pitch) * math.cos(yaw)
    b = rho * math.cos(pitch) * math.sin(yaw)
    c = z * math.sin(pitch)
    return _arc_where_positive(a, b, c)


# ---------------------------------------------------------------------------
# Ring (bottom/surface) beam-pattern averages


def _ring_gain(theta_r: np.ndarray, rho: float, z: float, pitch: float, yaw: float,
               sonar: SonarConfig, c: float) -> np.ndarray:
    v = np.stack(
        [rho * np.cos(theta_r), rho * np.sin(theta_r), np.full_like(theta_r, z)],
        axis=-1,
    )
    vb = rotate_to_sonar_frame(v, pitch, yaw)
    theta, psi = beam_angles_surface(vb)
    return beam_gain(theta, psi, sonar, c)


def ring_bp_average(
    rho_mid: float,
    z: float,
    pose: SonarPose,
    beam: BeamOrientation,
    sonar: SonarConfig,
    c: float,
    *,
    transmit_beam: BeamOrientation | None = None,
    mode: str = "coupled",
) -> float:
    """Average beam-pattern loss (dB) around the ring of radius rho_mid at
    vertical offset z from the sonar, or NO_RESPONSE when the whole ring is
    outside the gate.

    In "coupled" mode the result is the combined transmit-times-receive
    average; in the other modes the average of the single orientation given
    by ``beam`` (callers evaluate the transmitter with a second call).
    """
    _check_mode(mode)
    pitch_r, yaw_r = _orientation(pose, beam)
    if mode == "coupled":
        tx = transmit_beam if transmit_beam is not None else beam
        pitch_t, yaw_t = _orientation(pose, tx)
        domain = _intersect_intervals(
            _ring_front_arc(rho_mid, z, pitch_r, yaw_r),
            _ring_front_arc(rho_mid, z, pitch_t, yaw_t),
        )
        if not domain:
            return NO_RESPONSE

        def integrand(theta_r):
            return _ring_gain(theta_r, rho_mid, z, pitch_r, yaw_r, sonar, c) * _ring_gain(
                theta_r, rho_mid, z, pitch_t, yaw_t, sonar, c
            )

        total = sum(_adaptive_trapezoid(integrand, lo, hi) for lo, hi in domain)
        return to_db(total / (2.0 * math.pi))

    domain = _ring_front_arc(rho_mid, z, pitch_r, yaw_r)
    if not domain:
        return NO_RESPONSE
    if mode == "independent":

        def integrand(theta_r):
            return _ring_gain(theta_r, rho_mid, z, pitch_r, yaw_r, sonar, c)

        total = sum(_adaptive_trapezoid(integrand, lo, hi) for lo, hi in domain)
        return to_db(total / (2.0 * math.pi))

    def integrand_db(theta_r):
        gain = _ring_gain(theta_r, rho_mid, z, pitch_r, yaw_r, sonar, c)
        out = np.full(gain.shape, PRINTED_FLOOR_DB)
        pos = gain > 0
        out[pos] = np.maximum(10.0 * np.log10(gain[pos]), PRINTED_FLOOR_DB)
        return out

    total = sum(
        _adaptive_trapezoid(integrand_db, lo, hi, signed=True) for lo, hi in domain
    )
    return total / math.pi


def avg_ring_bp_loss(
    n: int,
    layout: BinLayout,
    pose: SonarPose,
    beam: BeamOrientation,
    sonar: SonarConfig,
    c: float,
    *,
    vertical_offset_m: float | None = None,
    transmit_beam: BeamOrientation | None = None,
    mode: str = "coupled",
) -> float:
    """Average beam-pattern loss around the ensonified ring of bin n.

    vertical_offset_m defaults to the pose altitude (bottom ring); pass
    -pose.depth_m for the surface ring.
    """
    z = pose.altitude_m if vertical_offset_m is None else vertical_offset_m
    h = abs(z)
    if h >= layout.edge(n):
        raise ValueError(f"bin {n} has no ensonified ring at offset {z}")
    r_outer = ring_radius(layout.edge(n), h)
    r_inner = ring_radius(layout.edge(n - 1), h)
    rho_mid = (r_outer + r_inner) / 2.0
    return ring_bp_average(
        rho_mid, z, pose, beam, sonar, c, transmit_beam=transmit_beam, mode=mode
    )


# ---------------------------------------------------------------------------
# Shell (volume) beam-pattern averages


def _effective_cutoff(d_inner: float, d_outer: float, plane_distance: float) -> float:
    """Cutoff angle used by the expected-return pipeline. When the boundary
    plane lies at or beyond the shell midpoint it cannot clip the shell;
    cutoff_angle's 0 in that case means an absent boundary, not an empty
    gate, so the constraint is dropped and only the hemisphere clamp acts."""
    value = cutoff_angle(d_inner, d_outer, plane_distance)
    if value == 0.0:
        return math.inf
    return value


def _psi_band(pitch: float, theta_ha: float, theta_hd: float) -> tuple:
    """World-frame vertical-angle interval admitted for one orientation:
    the bottom/surface cutoff band shifted with the beam pitch, intersected
    with that beam's front hemisphere."""
    lo = max(-theta_ha + 2.0 * pitch, pitch - math.pi / 2.0)
    hi = min(theta_hd + 2.0 * pitch, pitch + math.pi / 2.0)
    return lo, hi


def _theta_v_of_psi(psi: float, cos_theta_h: np.ndarray) -> np.ndarray:
    """Parameter angle theta_v at which the world vertical angle equals psi
    along the column at horizontal parameter theta_h."""
    return np.arctan2(math.sin(psi) * cos_theta_h, math.cos(psi))


def _shell_gain_pointwise(
    theta_h: np.ndarray,
    theta_v: np.ndarray,
    orientations: list,
    theta_ha: float,
    theta_hd: float,
    sonar: SonarConfig,
    c: float,
) -> np.ndarray:
    """Gated gain product on a (theta_h, theta_v) grid, gating each
    orientation's vertical band pointwise (general-yaw fallback)."""
    v = np.stack(
        [
            np.cos(theta_h)[:, None] * np.cos(theta_v)[None, :],
            np.broadcast_to(np.sin(theta_h)[:, None], (theta_h.size, theta_v.size)),
            np.broadcast_to(np.sin(theta_v)[None, :], (theta_h.size, theta_v.size)),
        ],
        axis=-1,
    )
    product = np.ones(v.shape[:-1])
    for pitch, yaw in orientations:
        vb = rotate_to_sonar_frame(v, pitch, yaw)
        theta, psi = beam_angles_volume(vb)
        gain = beam_gain(theta, psi, sonar, c)
        band = (psi > -theta_ha + pitch) & (psi < theta_hd + pitch)
        product = product * np.where(band, gain, 0.0)
    return product


def shell_bp_average(
    d_inner: float,
    d_outer: float,
    pose: SonarPose,
    beam: BeamOrientation,
    sonar: SonarConfig,
    c: float,
    *,
    cutoffs: tuple | None = None,
    transmit_beam: BeamOrientation | None = None,
    mode: str = "coupled",
) -> float:
    """Average beam-pattern loss (dB) over the gated shell between slant
    ranges d_inner and d_outer, or NO_RESPONSE when the gate is empty.

    The shell is parametrized by the in-plane angle pair (theta_h, theta_v)
    over the full square; the square double-covers directions, which the
    strip reduction accounts for. Vertical gating excludes angles beyond the
    bottom/surface cutoffs, shifted per orientation with its pitch.
    """
    _check_mode(mode)
    if cutoffs is None:
        theta_ha = _effective_cutoff(d_inner, d_outer, pose.altitude_m)
        theta_hd = _effective_cutoff(d_inner, d_outer, pose.depth_m)
    else:
        theta_ha, theta_hd = cutoffs
    if theta_ha <= 0.0 and theta_hd <= 0.0:
        return NO_RESPONSE

    if mode == "coupled":
        tx = transmit_beam if transmit_beam is not None else beam
        orientations = [_orientation(pose, beam), _orientation(pose, tx)]
    else:
        orientations = [_orientation(pose, beam)]

    signed = mode == "printed"
    yawed = any(yaw != 0.0 for _, yaw in orientations) or any(
        abs(pitch) >= math.pi / 2.0 for pitch, _ in orientations
    )

    if yawed:
        # Pointwise gating over the strip; gate edges are not aligned to the
        # grid, so convergence relies on the panel cap.
        def integrand(theta_h, theta_v):
            vals = _shell_gain_pointwise(
                theta_h, theta_v, orientations, theta_ha, theta_hd, sonar, c
            )
            if signed:
                out = np.full(vals.shape, PRINTED_FLOOR_DB)
                pos = vals > 0
                out[pos] = np.maximum(10.0 * np.log10(vals[pos]), PRINTED_FLOOR_DB)
                return out
            return vals

        def on_unit_square(theta_h, u):
            return integrand(theta_h, -math.pi + u * 2.0 * math.pi) * (2.0 * math.pi)

        total = _adaptive_trapezoid_2d(
            on_unit_square, -math.pi / 2.0, math.pi / 2.0, signed=signed
        )
    else:
        lo = hi = None
        for pitch, _ in orientations:
            band_lo, band_hi = _psi_band(pitch, theta_ha, theta_hd)
            lo = band_lo if lo is None else max(lo, band_lo)
            hi = band_hi if hi is None else min(hi, band_hi)
        if hi <= lo:
            return NO_RESPONSE

        def integrand(theta_h, u):
            cos_h = np.cos(theta_h)
            tv_lo = _theta_v_of_psi(lo, cos_h)
            tv_hi = _theta_v_of_psi(hi, cos_h)
            width = tv_hi - tv_lo
            theta_v = tv_lo[:, None] + u[None, :] * width[:, None]
            v = np.stack(
                [
                    cos_h[:, None] * np.cos(theta_v),
                    np.broadcast_to(np.sin(theta_h)[:, None], theta_v.shape),
                    np.sin(theta_v),
                ],
                axis=-1,
            )
            product = np.ones(theta_v.shape)
            for pitch, yaw in orientations:
                vb = rotate_to_sonar_frame(v, pitch, yaw)
                theta, psi = beam_angles_volume(vb)
                product = product * beam_gain(theta, psi, sonar, c)
            if signed:
                out = np.full(product.shape, PRINTED_FLOOR_DB)
                pos = product > 0
                out[pos] = np.maximum(10.0 * np.log10(product[pos]), PRINTED_FLOOR_DB)
                return out * width[:, None]
            return product * width[:, None]

        total = _adaptive_trapezoid_2d(
            integrand, -math.pi / 2.0, math.pi / 2.0, signed=signed
        )

    # The strip covers half of the parameter square, hence the factor 2.
    if signed:
        return 2.0 * total / math.pi**2
    average = 2.0 * total / (4.0 * math.pi**2)
    return to_db(average)


def avg_sphere_bp_loss(
    n: int,
    layout: BinLayout,
    pose: SonarPose,
    beam: BeamOrientation,
    sonar: SonarConfig,
    c: float,
    cutoffs: tuple | None = None,
    *,
    transmit_beam: BeamOrientation | None = None,
    mode: str = "coupled",
) -> float:
    """Average beam-pattern loss over the gated shell of bin n."""
    return shell_bp_average(
        layout.edge(n - 1),
        layout.edge(n),
        pose,
        beam,
        sonar,
        c,
        cutoffs=cutoffs,
        transmit_beam=transmit_beam,
        mode=mode,
    )


# ---------------------------------------------------------------------------
# Per-bin expected returns


def _resolution_cells(layout: BinLayout, delta_y: float):
    """Number of equal cells per bin: the largest count of cells no shorter
    than delta_y that tile the bin exactly (at least one)."""
    m = max(1, int(math.floor(layout.bin_length_m / delta_y + 1e-9)))
    return m, layout.bin_length_m / m


def _bp_terms(avg_combined, avg_t, avg_r, mode: str) -> tuple:
    if mode == "coupled":
        return avg_combined, 0.0
    return avg_t, avg_r


def bottom_return_bins(
    env: EnvironmentParams,
    sonar: SonarConfig,
    pose: SonarPose,
    beam: BeamOrientation,
    layout: BinLayout,
    *,
    transmit_beam: BeamOrientation | None = None,
    mode: str = "coupled",
) -> np.ndarray:
    """Expected bottom reverberation level per bin (dB, NO_RESPONSE where
    the bottom is out of reach)."""
    return _ring_return_bins(
        env, sonar, pose, beam, layout, kind="bottom",
        transmit_beam=transmit_beam, mode=mode,
    )


def surface_return_bins(
    env: EnvironmentParams,
    sonar: SonarConfig,
    pose: SonarPose,
    beam: BeamOrientation,
    layout: BinLayout,
    *,
    transmit_beam: BeamOrientation | None = None,
    mode: str = "coupled",
) -> np.ndarray:
    """Expected surface reverberation level per bin; the bottom pipeline
    mirrored above the sonar with the surface coefficient."""
    return _ring_return_bins(
        env, sonar, pose, beam, layout, kind="surface",
        transmit_beam=transmit_beam, mode=mode,
    )


def _ring_return_bins(env, sonar, pose, beam, layout, *, kind, transmit_beam, mode):
    _check_mode(mode)
    c = env.sound_speed()
    alpha_w = absorption_coeff(sonar.frequency_khz, env)
    delta_y = range_resolution(c, sonar.bandwidth_hz)
    m, cell_len = _resolution_cells(layout, delta_y)
    f = sonar.frequency_khz
    sl = sonar.source_level_db
    tx = transmit_beam if transmit_beam is not None else beam

    if kind == "bottom":
        offset = pose.altitude_m
        z = offset
    else:
        offset = pose.depth_m
        z = -offset

    out = np.full(layout.num_bins, NO_RESPONSE)
    for n in range(1, layout.num_bins + 1):
        bin_start = layout.edge(n - 1)
        if offset >= layout.edge(n):
            continue
        acc = 0.0
        for i in range(m):
            a = bin_start + i * cell_len
            b = a + cell_len
            if offset >= b:
                continue
            r_a = ring_radius(a, offset)
            r_b = ring_radius(b, offset)
            area = math.pi * (r_b * r_b - r_a * r_a)
            if area <= 0.0:
                continue
            grazing = grazing_between(a, b, offset)
            if kind == "bottom":
                coeff = bottom_coeff(env.bottom_type, grazing, f)
            else:
                coeff = surface_coeff(env.wind_knots, grazing, f)
            rho_mid = (r_a + r_b) / 2.0
            avg_combined = avg_t = avg_r = NO_RESPONSE
            if mode == "coupled":
                avg_combined = ring_bp_average(
                    rho_mid, z, pose, beam, sonar, c,
                    transmit_beam=tx, mode=mode,
                )
            else:
                avg_t = ring_bp_average(rho_mid, z, pose, tx, sonar, c, mode=mode)
                avg_r = ring_bp_average(rho_mid, z, pose, beam, sonar, c, mode=mode)
            bp_t, bp_r = _bp_terms(avg_combined, avg_t, avg_r, mode)
            d_c = b - cell_len / 2.0
            rl = reverb_level(
                sl, transmission_loss(d_c, alpha_w), bp_t, bp_r, coeff, area
            )
            acc += to_linear(rl)
        out[n - 1] = to_db(acc)
    return out


def volume_return_bins(
    env: EnvironmentParams,
    sonar: SonarConfig,
    pose: SonarPose,
    beam: BeamOrientation,
    layout: BinLayout,
    *,
    transmit_beam: BeamOrientation | None = None,
    mode: str = "coupled",
) -> np.ndarray:
    """Expected volume reverberation level per bin (dB). The ensonified
    volume of a cell is the full hollow shell; the bottom and surface cuts
    are accounted for by the gated beam-pattern average."""
    _check_mode(mode)
    c = env.sound_speed()
    alpha_w = absorption_coeff(sonar.frequency_khz, env)
    delta_y = range_resolution(c, sonar.bandwidth_hz)
    m, cell_len = _resolution_cells(layout, delta_y)
    coeff = volume_coeff(env.particle_density_db, sonar.frequency_khz)
    sl = sonar.source_level_db
    tx = transmit_beam if transmit_beam is not None else beam

    out = np.full(layout.num_bins, NO_RESPONSE)
    for n in range(1, layout.num_bins + 1):
        bin_start = layout.edge(n - 1)
        acc = 0.0
        for i in range(m):
            a = bin_start + i * cell_len
            b = a + cell_len
            volume = 4.0 / 3.0 * math.pi * (b**3 - a**3)
            avg_combined = avg_t = avg_r = NO_RESPONSE
            if mode == "coupled":
                avg_combined = shell_bp_average(
                    a, b, pose, beam, sonar, c, transmit_beam=tx, mode=mode
                )
                if avg_combined == NO_RESPONSE:
                    continue
            else:
                avg_t = shell_bp_average(a, b, pose, tx, sonar, c, mode=mode)
                avg_r = shell_bp_average(a, b, pose, beam, sonar, c, mode=mode)
                if avg_t == NO_RESPONSE or avg_r == NO_RESPONSE:
                    continue
            bp_t, bp_r = _bp_terms(avg_combined, avg_t, avg_r, mode)
            d_c = b - cell_len / 2.0
            rl = reverb_level(
                sl, transmission_loss(d_c, alpha_w), bp_t, bp_r, coeff, volume
            )
            acc += to_linear(rl)
        out[n - 1] = to_db(acc)
    return out


def expected_null(
    env: EnvironmentParams,
    sonar: SonarConfig,
    pose: SonarPose,
    beam: BeamOrientation,
    layout: BinLayout | None = None,
    *,
    transmit_beam: BeamOrientation | None = None,
    mode: str = "coupled",
    include_bottom: bool = True,
    include_surface: bool = True,
    include_volume: bool = True,
) -> NullModelReturn:
    """Expected per-bin return with no obstacle: the power sum of bottom,
    surface and volume reverberation. Components can be excluded to match a
    scene that disables them."""
    if layout is None:
        c = env.sound_speed()
        layout = BinLayout.from_range(
            max_range(c, sonar.ping_rate_hz), sonar.bin_length_m
        )
    empty = np.full(layout.num_bins, NO_RESPONSE)
    kwargs = {"transmit_beam": transmit_beam, "mode": mode}
    bottom = (
        bottom_return_bins(env, sonar, pose, beam, layout, **kwargs)
        if include_bottom
        else empty.copy()
    )
    surface = (
        surface_return_bins(env, sonar, pose, beam, layout, **kwargs)
        if include_surface
        else empty.copy()
    )
    volume = (
        volume_return_bins(env, sonar, pose, beam, layout, **kwargs)
        if include_volume
        else empty.copy()
    )
    return NullModelReturn(
        layout=layout,
        pose=pose,
        beam=beam,
        bottom_db=bottom,
        surface_db=surface,
        volume_db=volume,
    )
