"""Closed-form eigenfunctions g_1..g_7 of eigenvalue 6 on K_{n,m}."""

from dataclasses import dataclass

import numpy as np

from .elliptic import jacobi


@dataclass(frozen=True)
class ModeInfo:
    label: int
    j: int          # Fourier mode on the double cover
    x_parity: str   # parity of the x-factor under x -> -x
    trig: str       # "const", "cos" or "sin"


def mode_table(params):
    n, m = params.n, params.m
    a, c, d = (2 * n + m) // 3, (n + 2 * m) // 3, (n - m) // 3
    return [
        ModeInfo(1, 0, "even", "const"),
        ModeInfo(2, a, "even", "cos"),
        ModeInfo(3, a, "even", "sin"),
        ModeInfo(4, c, "odd", "cos"),
        ModeInfo(5, c, "odd", "sin"),
        ModeInfo(6, d, "odd", "cos"),
        ModeInfo(7, d, "odd", "sin"),
    ]


def frequency_ratios(params):
    """Each y-frequency divided by the base frequency 3/(sqrt(2) m b)."""
    n, m = params.n, params.m
    return [0.0] + [f / 3.0 for f in (2 * n + m, 2 * n + m, n + 2 * m, n + 2 * m, n - m, n - m)]


def g_closed_form(params, i, x, y):
    """Value of g_i at chart points (x, y)."""
    if i not in range(1, 8):
        raise ValueError(f"eigenfunction label must be in 1..7, got {i}")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    e = jacobi(params.r * x, params.p)
    b = params.b
    if i == 1:
        return b * (1.0 - params.q2 * e.sn**2) - (1.0 + 2.0 * b**3) / (3.0 * b * b)
    info = mode_table(params)[i - 1]
    factor = {2: e.dn * e.cn, 4: e.dn * e.sn, 6: e.cn * e.sn}[i - (i % 2 == 1)]
    wave = np.cos if info.trig == "cos" else np.sin
    return factor * wave(params.omega(info.j) * y)
