"""Switch-type mmWave step attenuator models: synthesis, sweeps, calibration."""

from ._core import (
    Chip,
    ConfigError,
    NumericError,
    eval_eq1,
    eval_eq2,
    mag_db,
    phase_deg,
    read_touchstone,
    solve_netlist,
    synth_ttype,
    wrap_deg,
    write_touchstone,
)

__all__ = [
    "Chip",
    "ConfigError",
    "NumericError",
    "eval_eq1",
    "eval_eq2",
    "mag_db",
    "phase_deg",
    "read_touchstone",
    "solve_netlist",
    "synth_ttype",
    "wrap_deg",
    "write_touchstone",
]
