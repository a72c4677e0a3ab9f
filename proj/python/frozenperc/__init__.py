"""Frozen percolation on the triangular lattice."""

from ._core import (
    FinalState,
    embed,
    estimate_crossing,
    estimate_L,
    estimate_net,
    estimate_pi1,
    estimate_pi4,
    estimate_theta,
    fit_arm_exponent,
    freeze_window,
    load_final_state,
    macro_cluster,
    neighbors,
    origin_freeze,
    p_lambda,
    reference_simulate,
    replica_seed,
    simulate,
    tau,
    volume_scan,
    wilson_interval,
)

WHITE, BLACK, FROZEN = 0, 1, 2

__all__ = [name for name in dir() if not name.startswith("_")]
