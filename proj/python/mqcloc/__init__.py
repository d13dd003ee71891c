"""Python bindings for the mqcloc spin-cluster simulator."""

from ._core import (
    MqclocError,
    backward_observable,
    cluster_size,
    collective_iz,
    default_config,
    forward_state,
    h0,
    h_dd,
    h_eff,
    plateau,
    powerlaw_fit,
    random_couplings,
    rms_coupling_per_spin,
    run,
    spectrum,
)

__all__ = [
    "MqclocError",
    "backward_observable",
    "cluster_size",
    "collective_iz",
    "default_config",
    "forward_state",
    "h0",
    "h_dd",
    "h_eff",
    "plateau",
    "powerlaw_fit",
    "random_couplings",
    "rms_coupling_per_spin",
    "run",
    "spectrum",
]
