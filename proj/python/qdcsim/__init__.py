"""Python access to the qdcsim simulator core."""

import json

import numpy as np

from . import _qdcsim

__all__ = [
    "classical_query",
    "compress_unary",
    "decompress",
    "estimate",
    "sweep",
    "threshold_preset_kappa",
    "run_session",
    "phase_estimation",
    "hardware_cost",
]


def classical_query(data, word_width, address):
    """Amplitudes over Q1 ⊗ Q2 after querying `data` with address amplitudes `address`."""
    return _qdcsim.classical_query(list(data), word_width, np.asarray(address, dtype=complex))


def compress_unary(alpha):
    return _qdcsim.compress_unary([complex(a) for a in alpha])


def decompress(binary):
    return _qdcsim.decompress(np.asarray(binary, dtype=complex))


def estimate(n, **params):
    """Relative time cost at QRAM size `n`; keyword arguments overlay the default parameters."""
    return json.loads(_qdcsim.estimate_json(json.dumps(params), n))


def sweep(log_min=4, log_max=20, **params):
    return json.loads(_qdcsim.sweep_json(json.dumps(params), log_min, log_max))


def threshold_preset_kappa(threshold, **params):
    return _qdcsim.threshold_preset_kappa(json.dumps(params), threshold)


def run_session(senders=2, receivers=2, qdcs=2, shares=2, width=1, adversary="honest", seed=0,
                loss=0.0, privacy_metrics=True):
    return json.loads(_qdcsim.session_json(senders, receivers, qdcs, shares, width, adversary, seed,
                                           loss, privacy_metrics))


def phase_estimation(phi, bins=4, shots=10000, seed=0, trials=16, loss=0.0):
    return json.loads(_qdcsim.phase_estimation_json(phi, bins, shots, seed, trials, loss))


def hardware_cost(bands, time_bins):
    return _qdcsim.hardware_cost(bands, time_bins)
