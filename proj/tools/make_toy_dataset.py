#!/usr/bin/env python3
"""Writes the bundled two-zone toy dataset (deterministic)."""

import argparse
import csv
import math
from pathlib import Path

import numpy as np

DAYS_IN_MONTH = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31]

ZONES = [
    # zone, name, underground_h2_allowed
    ("north", "Northern plains", 1),
    ("south", "Southern coast", 0),
]

AVERAGE_LOAD = {"north": 800.0, "south": 1200.0}

COSTS = [
    # technology, unit, capital, capital_energy, fixed_om, fixed_om_energy, variable_om, lifetime
    ("coal", "kw", 800, 0, 30, 0, 3.0, 30),
    ("gas_ct", "kw", 550, 0, 15, 0, 4.0, 30),
    ("gas_cc", "kw", 800, 0, 20, 0, 3.0, 30),
    ("nuclear", "kw", 2800, 0, 100, 0, 2.0, 40),
    ("onshore_wind", "kw", 800, 0, 30, 0, 0.0, 25),
    ("offshore_wind", "kw", 1800, 0, 60, 0, 0.0, 25),
    ("solar_pv", "kw", 350, 0, 12, 0, 0.0, 25),
    ("hydro", "kw", 1500, 0, 25, 0, 1.0, 50),
    ("battery", "kw", 150, 150, 5, 2, 0.5, 15),
    ("pumped_hydro", "kw", 800, 15, 10, 0, 0.5, 50),
    ("electrolyzer", "kw", 400, 0, 8, 0, 0.5, 20),
    ("fuel_cell", "kw", 1000, 0, 20, 0, 1.0, 20),
    ("h2_turbine", "kw", 500, 0, 10, 0, 2.0, 30),
    ("h2_cavern", "kw", 0, 0.8, 0, 0.01, 0.0, 40),
    ("h2_tank", "kw", 0, 12, 0, 0.2, 0.0, 25),
    ("smr", "kw", 700, 0, 25, 0, 1.0, 25),
    ("gasification", "kw", 1500, 0, 60, 0, 1.5, 25),
    ("ccs_coal", "tonne_per_hour", 2200000, 0, 60000, 0, 10.0, 30),
    ("ccs_gas", "tonne_per_hour", 2800000, 0, 80000, 0, 10.0, 30),
    ("ccs_smr", "tonne_per_hour", 1500000, 0, 45000, 0, 8.0, 25),
    ("dac", "tonne_per_hour", 6000000, 0, 240000, 0, 20.0, 25),
    ("co2_storage_onshore", "tonne_per_hour", 150000, 0, 5000, 0, 0.0, 30),
    ("co2_storage_offshore", "tonne_per_hour", 300000, 0, 10000, 0, 0.0, 30),
]

PROJECT_COLUMNS = [
    "project", "zone", "kind", "technology", "candidate", "fuel", "efficiency", "charge_efficiency",
    "discharge_efficiency", "min_gen_fraction", "ramp_fraction", "parent", "capture_rate", "ele_per_tonne",
    "max_new_capacity", "power_limit", "duration_hours",
]

PROJECTS = [
    dict(project="coal_n", zone="north", kind="thermal_gen", technology="coal", candidate=1, fuel="coal",
         efficiency=0.40, min_gen_fraction=0.0, ramp_fraction=0.5),
    dict(project="gasct_n", zone="north", kind="thermal_gen", technology="gas_ct", candidate=0, fuel="gas",
         efficiency=0.33),
    dict(project="nuclear_n", zone="north", kind="nuclear", technology="nuclear", candidate=1, fuel="uranium",
         efficiency=0.33, min_gen_fraction=1.0, max_new_capacity=400),
    dict(project="wind_n", zone="north", kind="vre_gen", technology="onshore_wind", candidate=1,
         max_new_capacity=6000),
    dict(project="solar_n", zone="north", kind="vre_gen", technology="solar_pv", candidate=1,
         max_new_capacity=6000),
    dict(project="hydro_n", zone="north", kind="hydro", technology="hydro", candidate=1, max_new_capacity=1000),
    dict(project="phs_n", zone="north", kind="pumped_hydro", technology="pumped_hydro", candidate=1,
         charge_efficiency=0.87, discharge_efficiency=0.87, duration_hours=8, max_new_capacity=300),
    dict(project="battery_n", zone="north", kind="battery", technology="battery", candidate=1,
         charge_efficiency=0.92, discharge_efficiency=0.92, duration_hours=4),
    dict(project="p2g_n", zone="north", kind="p2g", technology="electrolyzer", candidate=1, efficiency=0.70),
    dict(project="fuelcell_n", zone="north", kind="g2p_fuel_cell", technology="fuel_cell", candidate=1,
         efficiency=0.55),
    dict(project="h2ct_n", zone="north", kind="g2p_turbine", technology="h2_turbine", candidate=1, efficiency=0.40),
    dict(project="cavern_n", zone="north", kind="h2_storage_underground", technology="h2_cavern", candidate=1,
         charge_efficiency=0.98, discharge_efficiency=1.0),
    dict(project="tank_n", zone="north", kind="h2_storage_tank", technology="h2_tank", candidate=1,
         charge_efficiency=0.95, discharge_efficiency=1.0),
    dict(project="gasif_n", zone="north", kind="gasification", technology="gasification", candidate=1,
         fuel="coal", efficiency=0.60),
    dict(project="ccs_coal_n", zone="north", kind="ccs_retrofit", technology="ccs_coal", candidate=1,
         parent="coal_n", capture_rate=0.9, ele_per_tonne=0.25),
    dict(project="ccs_gasif_n", zone="north", kind="ccs_retrofit", technology="ccs_smr", candidate=1,
         parent="gasif_n", capture_rate=0.9, ele_per_tonne=0.12),
    dict(project="dac_n", zone="north", kind="dac", technology="dac", candidate=1, ele_per_tonne=1.5),

    dict(project="gasct_s", zone="south", kind="thermal_gen", technology="gas_ct", candidate=0, fuel="gas",
         efficiency=0.33),
    dict(project="gascc_s", zone="south", kind="thermal_gen", technology="gas_cc", candidate=1, fuel="gas",
         efficiency=0.55, ramp_fraction=0.6),
    dict(project="nuclear_s", zone="south", kind="nuclear", technology="nuclear", candidate=1, fuel="uranium",
         efficiency=0.33, min_gen_fraction=1.0, max_new_capacity=400),
    dict(project="solar_s", zone="south", kind="vre_gen", technology="solar_pv", candidate=1,
         max_new_capacity=8000),
    dict(project="offwind_s", zone="south", kind="vre_gen", technology="offshore_wind", candidate=1,
         max_new_capacity=3000),
    dict(project="battery_s", zone="south", kind="battery", technology="battery", candidate=1,
         charge_efficiency=0.92, discharge_efficiency=0.92, duration_hours=4),
    dict(project="p2g_s", zone="south", kind="p2g", technology="electrolyzer", candidate=1, efficiency=0.70),
    dict(project="h2ct_s", zone="south", kind="g2p_turbine", technology="h2_turbine", candidate=1, efficiency=0.40),
    dict(project="tank_s", zone="south", kind="h2_storage_tank", technology="h2_tank", candidate=1,
         charge_efficiency=0.95, discharge_efficiency=1.0),
    dict(project="smr_s", zone="south", kind="smr", technology="smr", candidate=1, fuel="gas", efficiency=0.74),
    dict(project="ccs_gas_s", zone="south", kind="ccs_retrofit", technology="ccs_gas", candidate=1,
         parent="gascc_s", capture_rate=0.9, ele_per_tonne=0.3),
    dict(project="ccs_smr_s", zone="south", kind="ccs_retrofit", technology="ccs_smr", candidate=1,
         parent="smr_s", capture_rate=0.9, ele_per_tonne=0.12),
    dict(project="dac_s", zone="south", kind="dac", technology="dac", candidate=1, ele_per_tonne=1.5),
]

EXISTING = {
    "north": {"coal": 0, "gas_ct": 300, "hydro": 400, "pumped_hydro": 100, "nuclear": 0},
    "south": {"gas_ct": 500, "nuclear": 200},
}

LINKS = [
    # link, commodity, from, to, length_km, existing, expandable, loss per 1000 km, capital per unit-km, lifetime
    ("ac_ns", "electricity", "north", "south", 1000, 300, 1, 0.03, 1200, 40),
    ("h2_ns", "hydrogen", "north", "south", 1000, 0, 1, 0.01, 400, 40),
    ("co2_sn", "co2", "south", "north", 1000, 0, 1, 0.0, 300000, 40),
]

FUEL_PRICES = [("coal", "", 3.0), ("gas", "", 8.0), ("gas", "north", 7.0), ("uranium", "", 0.7)]
EMISSION_FACTORS = [("coal", 0.0953), ("gas", 0.0531), ("uranium", 0.0)]
HYDRO_CF = [0.30, 0.28, 0.35, 0.45, 0.55, 0.65, 0.70, 0.68, 0.55, 0.45, 0.38, 0.32]


def calendar():
    doy = 0
    for month, days in enumerate(DAYS_IN_MONTH, start=1):
        for day in range(1, days + 1):
            yield month, day, doy
            doy += 1


def write(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def fmt(x):
    return f"{x:.4f}".rstrip("0").rstrip(".") if isinstance(x, float) else x


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=Path, nargs="?", default=Path("data/toy"))
    parser.add_argument("--seed", type=int, default=2050)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    write(out / "settings.csv", ["key", "value"],
          [("period", "2050"), ("discount_rate", "0.08"), ("dollar_year", "2020"),
           ("base_year_emissions_tonnes", "9000000")])
    write(out / "zones.csv", ["zone", "name", "underground_h2_allowed"], ZONES)
    write(out / "costs.csv",
          ["technology", "unit", "capital", "capital_energy", "fixed_om", "fixed_om_energy", "variable_om",
           "lifetime_years"], COSTS)
    write(out / "projects.csv", PROJECT_COLUMNS,
          [[p.get(c, "") for c in PROJECT_COLUMNS] for p in PROJECTS])
    techs = sorted({t for z in EXISTING.values() for t in z})
    write(out / "existing_capacity.csv", ["zone"] + techs,
          [[z] + [EXISTING[z].get(t, "") or "" for t in techs] for z, _, _ in ZONES])
    write(out / "fuel_prices.csv", ["fuel", "zone", "price_per_mmbtu"], FUEL_PRICES)
    write(out / "emission_factors.csv", ["fuel", "tonnes_per_mmbtu"], EMISSION_FACTORS)
    write(out / "links.csv",
          ["link", "commodity", "from_zone", "to_zone", "length_km", "existing_capacity", "expandable",
           "loss_rate_per_1000km", "capital_cost_per_unit_km", "lifetime_years"], LINKS)
    write(out / "hydro_cf.csv", ["project", "month", "capacity_factor"],
          [("hydro_n", m + 1, cf) for m, cf in enumerate(HYDRO_CF)])
    write(out / "h2_demand.csv", ["zone", "annual_share"], [("north", 0.35), ("south", 0.65)])
    write(out / "co2_sites.csv", ["zone", "kind", "capacity_tonnes"], [("north", "onshore", "inf")])

    demand_rows = []
    for zone, _, _ in ZONES:
        base = AVERAGE_LOAD[zone]
        summer_peak = 0.12 if zone == "south" else -0.05
        for month, day, doy in calendar():
            season = 1.0 + summer_peak * math.cos(2 * math.pi * (doy - 200) / 365) + 0.08 * math.cos(
                2 * math.pi * (doy - 15) / 365)
            weekday = 0.95 if doy % 7 in (5, 6) else 1.0
            day_noise = 1.0 + 0.03 * rng.standard_normal()
            for hour in range(24):
                shape = 1.0 + 0.18 * math.sin(math.pi * (hour - 7) / 14) if 7 <= hour <= 21 else 0.85
                load = base * season * weekday * day_noise * shape * (1.0 + 0.01 * rng.standard_normal())
                demand_rows.append((zone, month, day, hour, fmt(max(load, 0.0))))
    write(out / "demand.csv", ["zone", "month", "day", "hour", "demand_mw"], demand_rows)

    cf_rows = []
    vre = [p for p in PROJECTS if p["kind"] == "vre_gen"]
    for p in vre:
        wind = p["technology"].endswith("wind")
        offshore = p["technology"] == "offshore_wind"
        level = 0.0
        for month, day, doy in calendar():
            weather = float(np.clip(1.0 + 0.35 * rng.standard_normal(), 0.1, 1.8))
            for hour in range(24):
                if wind:
                    seasonal = (0.42 if offshore else 0.34) + 0.14 * math.cos(2 * math.pi * (doy - 20) / 365)
                    level = 0.7 * level + 0.3 * seasonal * weather * (1.0 + 0.1 * math.cos(2 * math.pi * hour / 24))
                    cf = level
                else:
                    sun = max(0.0, math.sin(math.pi * (hour - 6) / 12))
                    seasonal = 0.75 + 0.2 * math.cos(2 * math.pi * (doy - 172) / 365)
                    cf = sun * seasonal * min(1.0, 0.6 + 0.4 * weather)
                cf_rows.append((p["project"], month, day, hour, fmt(float(np.clip(cf, 0.0, 1.0)))))
    write(out / "capacity_factors.csv", ["project", "month", "day", "hour", "capacity_factor"], cf_rows)


if __name__ == "__main__":
    main()
