"""802.11ax link-budget pipeline.

Propagation over sea (free-space plus a two-ray far branch keyed to antenna
heights), radio horizon, thermal noise, Shannon-gap MCS selection, and HE
PHY/MAC data rates. Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import SeameshError
from .geo import EnuPoint, distance_2d, distance_3d
from .model import Environment, RadioConfig

SPEED_OF_LIGHT = 299_792_458.0

# Data subcarriers per HE channel width (MHz).
N_SD = {20: 234, 40: 468, 80: 980, 160: 1960}

# OFDM symbol: 12.8 us payload + guard interval.
SYMBOL_US = 12.8

MIN_LINK_DISTANCE_M = 1.0


class McsEntry(NamedTuple):
    index: int
    modulation: str
    bits_per_subcarrier: int
    coding_rate: float

    @property
    def spectral_efficiency(self) -> float:
        return self.bits_per_subcarrier * self.coding_rate


MCS_TABLE = (
    McsEntry(0, "BPSK", 1, 1 / 2),
    McsEntry(1, "QPSK", 2, 1 / 2),
    McsEntry(2, "QPSK", 2, 3 / 4),
    McsEntry(3, "16-QAM", 4, 1 / 2),
    McsEntry(4, "16-QAM", 4, 3 / 4),
    McsEntry(5, "64-QAM", 6, 2 / 3),
    McsEntry(6, "64-QAM", 6, 3 / 4),
    McsEntry(7, "64-QAM", 6, 5 / 6),
    McsEntry(8, "256-QAM", 8, 3 / 4),
    McsEntry(9, "256-QAM", 8, 5 / 6),
    McsEntry(10, "1024-QAM", 10, 3 / 4),
    McsEntry(11, "1024-QAM", 10, 5 / 6),
)


def fspl_db(distance_m: float, frequency_hz: float) -> float:
    """Free-space path loss, 20log10(d) + 20log10(f) - 147.55."""
    if distance_m <= 0:
        raise SeameshError("NONPOSITIVE_DISTANCE", f"distance {distance_m} m must be positive")
    if frequency_hz <= 0:
        raise ValueError("frequency_hz must be positive")
    return 20.0 * math.log10(distance_m) + 20.0 * math.log10(frequency_hz) - 147.55


def two_ray_breakpoint_m(frequency_hz: float, h_tx_m: float, h_rx_m: float) -> float:
    """Distance where the ground-reflection (sea) path starts to dominate."""
    return 4.0 * h_tx_m * h_rx_m * frequency_hz / SPEED_OF_LIGHT


def two_ray_loss_db(distance_m: float, frequency_hz: float, h_tx_m: float, h_rx_m: float) -> float:
    """Piecewise sea-path loss: FSPL to the breakpoint, then 40log10(d) growth.

    The far branch 40log10(d) - 20log10(h_tx*h_rx) is offset so the two
    branches meet continuously at the breakpoint.
    """
    if distance_m <= 0 or frequency_hz <= 0 or h_tx_m <= 0 or h_rx_m <= 0:
        raise SeameshError(
            "INVALID_GEOMETRY",
            "distance, frequency, and antenna heights must all be positive")
    d_b = two_ray_breakpoint_m(frequency_hz, h_tx_m, h_rx_m)
    if distance_m <= d_b:
        return fspl_db(distance_m, frequency_hz)
    hh = h_tx_m * h_rx_m
    far = 40.0 * math.log10(distance_m) - 20.0 * math.log10(hh)
    offset = fspl_db(d_b, frequency_hz) - (40.0 * math.log10(d_b) - 20.0 * math.log10(hh))
    return far + offset


def radio_horizon_km(h1_m: float, h2_m: float) -> float:
    """Line-of-sight limit over a 4/3-earth, 3.57(sqrt(h1) + sqrt(h2)) km."""
    if h1_m < 0 or h2_m < 0:
        raise ValueError("antenna heights must be >= 0")
    return 3.57 * (math.sqrt(h1_m) + math.sqrt(h2_m))


def noise_floor_dbm(width_mhz: float, noise_figure_db: float) -> float:
    """Thermal noise over the channel width plus receiver noise figure."""
    if width_mhz <= 0:
        raise ValueError("width_mhz must be positive")
    return -174.0 + 10.0 * math.log10(width_mhz * 1e6) + noise_figure_db


def phy_rate_mbps(mcs: McsEntry, width_mhz: int, spatial_streams: int, guard_interval_us: float) -> float:
    """HE PHY rate: nss * N_sd * bits * coding / (12.8 + GI) us."""
    if width_mhz not in N_SD:
        raise SeameshError("UNSUPPORTED_PARAMS", f"channel width {width_mhz} MHz not supported")
    if guard_interval_us not in (0.8, 1.6, 3.2):
        raise SeameshError("UNSUPPORTED_PARAMS", f"guard interval {guard_interval_us} us not supported")
    if spatial_streams < 1:
        raise SeameshError("UNSUPPORTED_PARAMS", "spatial_streams must be >= 1")
    bits = N_SD[width_mhz] * mcs.bits_per_subcarrier * mcs.coding_rate * spatial_streams
    return bits / (SYMBOL_US + guard_interval_us)


_MCS_ETA = tuple(e.bits_per_subcarrier * e.coding_rate for e in MCS_TABLE)


def select_mcs(snr_db: float, max_mcs: int = 11, gap_db: float = 6.02) -> McsEntry | None:
    """Highest MCS whose spectral efficiency fits log2(1 + SNR/gap), or None."""
    snr_lin = 10.0 ** (snr_db / 10.0)
    gap_lin = 10.0 ** (gap_db / 10.0)
    capacity = math.log2(1.0 + snr_lin / gap_lin)
    for i in range(min(max_mcs, 11), -1, -1):
        if _MCS_ETA[i] <= capacity:
            return MCS_TABLE[i]
    return None


def max_feasible_distance_m(
    tx_radio: RadioConfig, rx_radio: RadioConfig,
    h_tx_m: float, h_rx_m: float, env: Environment,
) -> float:
    """Largest link distance at which even MCS0 could still be selected.

    Inverts the (monotone) two-ray loss at the MCS0 SNR threshold and caps
    at the radio horizon; used to prune hopeless candidates before running
    full budgets. Conservative: anything beyond this range has no service.
    """
    gap_lin = 10.0 ** (env.snr_gap_db / 10.0)
    mcs0_eta = MCS_TABLE[0].spectral_efficiency
    snr_min_db = 10.0 * math.log10(gap_lin * (2.0 ** mcs0_eta - 1.0))
    width = tx_radio.channel_width_mhz
    pl_allow = (
        tx_radio.tx_power_dbm + tx_radio.antenna_gain_dbi + rx_radio.antenna_gain_dbi
        - env.extra_loss_db - noise_floor_dbm(width, rx_radio.noise_figure_db) - snr_min_db
    )
    freq = tx_radio.center_frequency_hz
    d_b = two_ray_breakpoint_m(freq, h_tx_m, h_rx_m)
    if pl_allow <= fspl_db(d_b, freq):
        d = 10.0 ** ((pl_allow + 147.55 - 20.0 * math.log10(freq)) / 20.0)
    else:
        hh = h_tx_m * h_rx_m
        offset = fspl_db(d_b, freq) - (40.0 * math.log10(d_b) - 20.0 * math.log10(hh))
        d = 10.0 ** ((pl_allow - offset + 20.0 * math.log10(hh)) / 40.0)
    return min(d, radio_horizon_km(h_tx_m, h_rx_m) * 1000.0)


@dataclass(frozen=True)
class LinkBudget:
    distance_m: float
    frequency_hz: float
    path_loss_db: float
    rx_power_dbm: float
    noise_floor_dbm: float
    snr_db: float
    beyond_horizon: bool
    mcs: int | None
    phy_rate_mbps: float
    mac_rate_mbps: float


def link_budget(
    tx_pos: EnuPoint, tx_height_m: float, tx_radio: RadioConfig,
    rx_pos: EnuPoint, rx_height_m: float, rx_radio: RadioConfig,
    env: Environment,
) -> LinkBudget:
    """Directional budget tx -> rx: transmitter's power/gain and frequency,
    receiver's gain and noise figure, shared channel width.
    """
    if tx_radio.band != rx_radio.band:
        raise SeameshError(
            "BAND_MISMATCH",
            f"tx on {tx_radio.band}, rx on {rx_radio.band}")
    if tx_radio.channel_width_mhz != rx_radio.channel_width_mhz:
        raise SeameshError(
            "BAND_MISMATCH",
            f"tx width {tx_radio.channel_width_mhz} MHz, rx width {rx_radio.channel_width_mhz} MHz")

    d3 = max(distance_3d(tx_pos, tx_height_m, rx_pos, rx_height_m), MIN_LINK_DISTANCE_M)
    d2 = distance_2d(tx_pos, rx_pos)
    freq = tx_radio.center_frequency_hz
    width = tx_radio.channel_width_mhz

    path_loss = two_ray_loss_db(d3, freq, tx_height_m, rx_height_m)
    rx_power = tx_radio.tx_power_dbm + tx_radio.antenna_gain_dbi + rx_radio.antenna_gain_dbi \
        - path_loss - env.extra_loss_db
    noise = noise_floor_dbm(width, rx_radio.noise_figure_db)
    snr = rx_power - noise

    beyond = d2 > radio_horizon_km(tx_height_m, rx_height_m) * 1000.0
    mcs_entry = None
    if not beyond:
        mcs_entry = select_mcs(snr, min(tx_radio.max_mcs, rx_radio.max_mcs), env.snr_gap_db)

    if mcs_entry is None:
        phy = mac = 0.0
        mcs_index = None
    else:
        nss = min(tx_radio.spatial_streams, rx_radio.spatial_streams)
        phy = phy_rate_mbps(mcs_entry, width, nss, tx_radio.guard_interval_us)
        mac = phy * env.mac_efficiency
        mcs_index = mcs_entry.index

    return LinkBudget(
        distance_m=d3,
        frequency_hz=freq,
        path_loss_db=path_loss,
        rx_power_dbm=rx_power,
        noise_floor_dbm=noise,
        snr_db=snr,
        beyond_horizon=beyond,
        mcs=mcs_index,
        phy_rate_mbps=phy,
        mac_rate_mbps=mac,
    )
