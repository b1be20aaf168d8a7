# SPDX-License-Identifier: Apache-2.0
"""Energy-efficient power control and link adaptation for HSDPA links."""

from ._core import *  # noqa: F401,F403
from ._core import RunResult, TtiOutcome

__version__ = "0.1.0"


def trace_columns(result: RunResult) -> dict:
    """Per-TTI trace as a dict of numpy arrays."""
    import numpy as np

    t = result.trace
    return {
        "tti": np.array([r.tti for r in t], dtype=np.int64),
        "p_tx_dbm": np.array([r.p_tx_dbm for r in t]),
        "mcs": np.array([r.mcs for r in t], dtype=np.int64),
        "mcs2": np.array([r.mcs2 for r in t], dtype=np.int64),
        "nack": np.array([r.outcome == TtiOutcome.NACK for r in t]),
        "sinr_db": np.array([r.sinr_db for r in t]),
        "delivered_bits": np.array([r.delivered_bits for r in t]),
        "energy_j": np.array([r.energy_j for r in t]),
        "delta_db": np.array([r.delta_db for r in t]),
        "reconfigured": np.array([r.reconfigured for r in t]),
        "retransmission": np.array([r.retransmission for r in t]),
    }
