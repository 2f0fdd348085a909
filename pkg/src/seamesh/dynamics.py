"""Non-radio time evolution: anchored-buoy drift, solar harvest, batteries.

Stepping is pure (state in, state out) and driven by explicit RNG handles so
the engine can give every node its own substream.
"""

from __future__ import annotations

import hashlib
import math
import random
from math import hypot, sqrt
from typing import NamedTuple

from .geo import EnuPoint
from .model import AnchorSpec, EnergyProfile, Environment


class BuoyState(NamedTuple):
    position: EnuPoint
    anchor: AnchorSpec


class EnergyState(NamedTuple):
    charge_wh: float
    operational: bool


def substream_rng(seed: int, node_id: str) -> random.Random:
    """Independent per-node RNG; stable across runs and node ordering."""
    digest = hashlib.sha256(f"{seed}:{node_id}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def step_buoy(state: BuoyState, dt_s: float, rng: random.Random) -> BuoyState:
    """Advance one step: current drift plus Brownian noise, chained to anchor."""
    a = state.anchor
    gauss = rng.gauss
    scale = a.drift_sigma * sqrt(dt_s)
    cx, cy = a.current_mps
    px, py = state.position
    x = px + cx * dt_s + scale * gauss(0.0, 1.0)
    y = py + cy * dt_s + scale * gauss(0.0, 1.0)
    ax, ay = a.anchor_point
    dx = x - ax
    dy = y - ay
    r = a.chain_radius_m
    if dx * dx + dy * dy <= r * r:
        return BuoyState(EnuPoint(x, y), a)
    # same arithmetic as geo.clamp_to_disk, inlined for the per-tick hot path
    pull = r / hypot(dx, dy)
    return BuoyState(EnuPoint(ax + dx * pull, ay + dy * pull), a)


def solar_factor(t_s_of_day: float, env: Environment) -> float:
    """Irradiance fraction [0,1]: half-sine over daylight, scaled by weather."""
    if t_s_of_day < env.sunrise_s or t_s_of_day > env.sunset_s:
        return 0.0
    phase = (t_s_of_day - env.sunrise_s) / (env.sunset_s - env.sunrise_s)
    return env.weather_factor * math.sin(math.pi * phase)


def step_energy(state: EnergyState, profile: EnergyProfile, factor: float, dt_s: float) -> EnergyState:
    """Advance battery charge one step and apply on/off hysteresis.

    Load (scaled by the TWT duty cycle) is drawn only while operational;
    harvest always flows in. Charge is clamped to [0, capacity].
    """
    harvest_w = profile.panel_max_w * factor
    load_w = profile.load_w * profile.duty_cycle if state.operational else 0.0
    charge = state.charge_wh + (harvest_w - load_w) * dt_s / 3600.0
    charge = min(max(charge, 0.0), profile.battery_capacity_wh)

    operational = state.operational
    if operational and charge <= profile.off_threshold_wh:
        operational = False
    elif not operational and charge >= profile.on_threshold_wh:
        operational = True
    return EnergyState(charge, operational)


def initial_energy_state(profile: EnergyProfile) -> EnergyState:
    """Batteries start full and powered on."""
    return EnergyState(profile.battery_capacity_wh, True)
