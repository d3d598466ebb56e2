"""Shape diagnostics for sampled profiles: extrema, zero crossings, growth ratios."""
from __future__ import annotations

import numpy as np


def local_extrema(phi) -> np.ndarray:
    """Indices of strict interior turning points, ignoring flat runs (e.g. the initial triple)."""
    phi = np.asarray(phi, dtype=float)
    d = np.diff(phi)
    nz = np.flatnonzero(d)
    if nz.size < 2:
        return np.empty(0, dtype=np.int64)
    s = np.sign(d[nz])
    turn = np.flatnonzero(s[1:] != s[:-1])
    # the turning node sits right after the last step of the first run
    return nz[turn] + 1


def sign_changes(phi) -> int:
    """Number of sign changes, zeros skipped."""
    s = np.sign(np.asarray(phi, dtype=float))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def first_zero_crossing(omega, phi) -> float | None:
    """Linearly interpolated omega of the first sign change, or None."""
    omega = np.asarray(omega, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if phi[0] == 0:
        return float(omega[0])
    idx = np.flatnonzero(np.sign(phi[1:]) != np.sign(phi[0]))
    if idx.size == 0:
        return None
    i = idx[0]
    if phi[i + 1] == 0:
        return float(omega[i + 1])
    w0, w1, f0, f1 = omega[i], omega[i + 1], phi[i], phi[i + 1]
    return float(w0 - f0 * (w1 - w0) / (f1 - f0))


def strictly_monotone(values, increasing: bool) -> bool:
    v = np.asarray(values, dtype=float)
    d = np.diff(v)
    return bool(np.all(d > 0) if increasing else np.all(d < 0))
