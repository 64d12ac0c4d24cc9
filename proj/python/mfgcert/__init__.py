"""Python frontend for the stationary MFG solver and uniqueness certifier."""

import json

from _mfgcert import (
    adjoint_solve,
    certify,
    check_exponents,
    congestion_alpha_max,
    linearize,
    monotonicity_probe,
    solve,
)

__all__ = [
    "adjoint_solve",
    "certify",
    "check_exponents",
    "congestion_alpha_max",
    "linearize",
    "make_config",
    "monotonicity_probe",
    "solve",
]


def make_config(
    d=1,
    n=64,
    family="power",
    gamma=2.0,
    alpha=1.0,
    potential=None,
    coupling=None,
    **extra,
):
    """Build the JSON configuration text the native functions expect.

    `potential` is a list of dicts like {"k": [1], "cos": 0.2}; `coupling`
    a dict like {"type": "power_law", "c": 1.0, "exponent": 1.0}.
    """
    hamiltonian = {"family": family, "gamma": gamma}
    if family == "congestion":
        hamiltonian["alpha"] = alpha
    if coupling is not None:
        hamiltonian["coupling_g"] = coupling
    if potential is not None:
        hamiltonian["potential_V"] = potential
    cfg = {"grid": {"d": d, "n": n}, "hamiltonian": hamiltonian}
    cfg.update(extra)
    return json.dumps(cfg)
