"""Nodal domains of g_1..g_7 on the Klein bottle fundamental domain.

The domain D = [0, Lx) x [0, Ly) is sampled at cell centres, so the grid is
mirror symmetric under x -> Lx - x (column i <-> Nx-1-i).  Gluing: columns
wrap directly; the top row is glued to the bottom row with x reversed.
"""

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.optimize import brentq

from .eigenfunctions import g_closed_form, mode_table
from .errors import ResolutionError
from .family import conformal_factor
from .spectral import worker_count

MIN_SAMPLES_PER_PERIOD = 32


@dataclass
class NodalGrid:
    params: object
    i: int
    Nx: int
    Ny: int
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray  # shape (Nx, Ny), axis 0 = x


@dataclass
class NodalReport:
    counts: list
    expected: list
    match: bool
    stable: bool = True
    refined_counts: list = field(default_factory=list)
    torus_g1: int = 0
    courant: int = 0
    grids: tuple = ()

    def to_json(self):
        return {"counts": self.counts, "expected": self.expected, "match": self.match,
                "stable": self.stable, "refinedCounts": self.refined_counts,
                "torusG1": self.torus_g1, "courant": self.courant,
                "grids": [list(g) for g in self.grids]}


def expected_counts(params):
    n, m = params.n, params.m
    a, c, d = 2 * (2 * n + m) // 3, 2 * (n + 2 * m) // 3, 4 * (n - m) // 3
    return [3, a, a, c, c, d, d]


def _check_resolution(params, i, Nx, Ny):
    info = mode_table(params)[i - 1]
    # x-factors of g_1 and g_6/g_7 have period Lx/2, the others Lx
    x_periods = 2 if i in (1, 6, 7) else 1
    y_periods = info.j / 2.0
    if Nx < MIN_SAMPLES_PER_PERIOD * x_periods:
        raise ResolutionError(f"Nx={Nx} too coarse for g_{i}")
    if Ny < MIN_SAMPLES_PER_PERIOD * y_periods:
        raise ResolutionError(f"Ny={Ny} too coarse for g_{i} (mode {info.j})")


def sample_g(params, i, Nx=512, Ny=512):
    """Closed-form samples of g_i on the cell centres of D."""
    _check_resolution(params, i, Nx, Ny)
    x = (np.arange(Nx) + 0.5) * params.Lx / Nx
    y = (np.arange(Ny) + 0.5) * params.Ly / Ny
    X, Y = np.meshgrid(x, y, indexing="ij")
    return NodalGrid(params, i, Nx, Ny, x, y, g_closed_form(params, i, X, Y))


def _wrap_pairs(shape, gluing):
    """Index pairs of cells adjacent across the glued edges."""
    Nx, Ny = shape
    rows = np.arange(Ny)
    cols = np.arange(Nx)
    x_pairs = (np.stack([np.full(Ny, Nx - 1), rows], 1), np.stack([np.zeros(Ny, int), rows], 1))
    partner = Nx - 1 - cols if gluing == "klein" else cols
    y_pairs = (np.stack([cols, np.full(Nx, Ny - 1)], 1), np.stack([partner, np.zeros(Nx, int)], 1))
    return [x_pairs, y_pairs]


def _count_mask_label(mask, gluing):
    labels, count = ndimage.label(mask)
    if count == 0:
        return 0
    parent = np.arange(count + 1)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for left, right in _wrap_pairs(mask.shape, gluing):
        la = labels[left[:, 0], left[:, 1]]
        lb = labels[right[:, 0], right[:, 1]]
        for a, b in zip(la, lb):
            if a and b:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
    return len({find(k) for k in range(1, count + 1)})


def _neighbours(i, j, Nx, Ny, gluing):
    yield (i + 1) % Nx, j
    yield (i - 1) % Nx, j
    for dj in (1, -1):
        jj = j + dj
        if 0 <= jj < Ny:
            yield i, jj
        else:
            ii = Nx - 1 - i if gluing == "klein" else i
            yield ii, jj % Ny


def _count_mask_queue(mask, gluing):
    Nx, Ny = mask.shape
    seen = np.zeros_like(mask, dtype=bool)
    count = 0
    for start in zip(*np.nonzero(mask)):
        if seen[start]:
            continue
        count += 1
        seen[start] = True
        queue = deque([start])
        while queue:
            i, j = queue.popleft()
            for nb in _neighbours(i, j, Nx, Ny, gluing):
                if mask[nb] and not seen[nb]:
                    seen[nb] = True
                    queue.append(nb)
    return count


def count_nodal_domains(grid, epsilon=0.0, gluing="klein", method="label"):
    """Connected components of {g > eps} plus those of {g < -eps}.

    4-neighbour adjacency; ``gluing`` is "klein" (top edge reversed) or
    "torus".  ``method="queue"`` runs an explicit-queue flood fill instead of
    the labelling + union-find path; both give the same count.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if gluing not in ("klein", "torus"):
        raise ValueError(f"unknown gluing {gluing!r}")
    if method not in ("label", "queue"):
        raise ValueError(f"unknown method {method!r}")
    v = grid.values
    excluded = np.abs(v) <= epsilon
    if excluded.mean() > 0.5:
        raise ResolutionError(f"epsilon={epsilon:g} excludes {excluded.mean():.0%} of samples")
    counter = _count_mask_label if method == "label" else _count_mask_queue
    return counter(v > epsilon, gluing) + counter(v < -epsilon, gluing)


def nodal_counts(params, Nx, Ny, epsilon=0.0):
    """Counts for g_1..g_7; each grid is filled on its own, grids run concurrently."""
    def one(i):
        return count_nodal_domains(sample_g(params, i, Nx, Ny), epsilon)

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        return list(pool.map(one, range(1, 8)))


def nodal_report(params, Nx=512, Ny=512):
    """Counts at (Nx, Ny) and (2Nx, 2Ny), compared with the closed-form counts."""
    counts = nodal_counts(params, Nx, Ny)
    refined = nodal_counts(params, 2 * Nx, 2 * Ny)
    expected = expected_counts(params)
    torus = count_nodal_domains(sample_g(params, 1, Nx, Ny), gluing="torus")
    courant = 2 * (2 * params.n + params.m) // 3
    return NodalReport(counts=counts, expected=expected,
                       match=counts == expected and refined == expected,
                       stable=counts == refined, refined_counts=refined,
                       torus_g1=torus, courant=courant,
                       grids=((Nx, Ny), (2 * Nx, 2 * Ny)))


def g1_zero_offset(params):
    """The a in (0, K/r) where e^{2u(a)} equals (1 + 2b^3)/(3b^2)."""
    b = params.b
    level = (1.0 + 2.0 * b**3) / (3.0 * b * b)
    quarter = params.Lx / 4.0
    return brentq(lambda t: float(conformal_factor(params, t)) - level, 0.0, quarter, xtol=1e-15)


def g1_zero_lines(params):
    a = g1_zero_offset(params)
    h = params.Lx / 2.0
    return [a, h - a, h + a, params.Lx - a]


def sign_map(grid, epsilon=0.0):
    """uint8 image 0 / 128 / 255 for negative / zero / positive samples."""
    v = grid.values
    img = np.full(v.shape, 128, dtype=np.uint8)
    img[v > epsilon] = 255
    img[v < -epsilon] = 0
    return img
