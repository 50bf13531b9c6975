"""Laplace-Beltrami spectra of K_{n,m}, index bookkeeping, and benchmarks.

The metric e^{2u(x)}(dx^2 + dy^2) is invariant under y-translation, so on
the orientable double cover [0, Lx) x [0, 2 Ly) eigenfunctions separate as
phi(x) e^{i omega_j y} with omega_j = 3 j / (sqrt(2) m b), and phi solves the
periodic problem

    -phi'' + omega_j^2 phi = lambda e^{2u} phi.

The glide (x, y) -> (-x, y + Ly) acts on such a mode by the sign
(x-parity of phi) * (-1)^j; plus-modes live on the Klein bottle, minus-modes
stand for its 2-forms.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .eigenfunctions import g_closed_form, mode_table
from .elliptic import complete_E, complete_K, jacobi
from .errors import AmbiguityError, ConvergenceError
from .family import conformal_factor
from .geometry import periodic_laplacian, torus_grid

INDEX_CUTOFF = 6.0
DEFAULT_MARGIN = 0.5
ZERO_TOL = 1e-8


def worker_count():
    env = os.environ.get("LAGSPEC_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


# --- one-dimensional periodic Sturm-Liouville problems --------------------

def _parity_tridiagonal(weight, h, omega, parity):
    """Tridiagonal symmetric matrix of one parity block.

    The grid x_k = k h, k = 0..N-1, is mirror symmetric about 0 (k <-> N-k),
    and so is the weight.  Restricting -D2 + omega^2 to mirror-even or
    mirror-odd grid vectors, in an orthonormal basis, gives a tridiagonal
    block; the diagonal weight is then absorbed symmetrically.
    """
    N = weight.size
    M = N // 2
    if parity == "even":
        idx = np.arange(0, M + 1)
        off = np.full(M, -1.0 / h**2)
        off[0] = off[-1] = -np.sqrt(2.0) / h**2
    else:
        idx = np.arange(1, M)
        off = np.full(M - 2, -1.0 / h**2)
    w = weight[idx]
    diag = (2.0 / h**2 + omega**2) / w
    off = off / np.sqrt(w[:-1] * w[1:])
    return diag, off


def periodic_sl_eigs(weight, period, omega, cutoff=None, count=None):
    """Eigenvalues of -phi'' + omega^2 phi = lambda w phi on a periodic grid.

    ``weight`` holds samples of an even weight at x_k = k * period / N.
    Returns ascending ``(lambda, parity)`` pairs, either all below ``cutoff``
    or the lowest ``count[parity]`` of each parity.
    """
    weight = np.asarray(weight, dtype=float)
    N = weight.size
    if N < 4 or N % 2:
        raise ValueError("grid size must be even and at least 4")
    if np.max(np.abs(weight - weight[(-np.arange(N)) % N])) > 1e-10 * np.max(weight):
        raise ValueError("weight is not even about x = 0")
    h = period / N
    out = []
    for parity in ("even", "odd"):
        d, e = _parity_tridiagonal(weight, h, omega, parity)
        if count is not None:
            k = count.get(parity, 0)
            if k == 0:
                continue
            vals = eigh_tridiagonal(d, e, eigvals_only=True, select="i",
                                    select_range=(0, k - 1))
        else:
            vals = eigh_tridiagonal(d, e, eigvals_only=True, select="v",
                                    select_range=(-np.inf, cutoff))
        out.extend((float(v), parity) for v in vals)
    return sorted(out)


def mode_frequency(params, j):
    return params.omega(j)


def sturm_liouville_eigs(params, j, gridN, cutoff):
    """Mode-j eigenvalues of K_{n,m} below ``cutoff``, with x-parity."""
    if gridN < 128 or gridN % 2:
        raise ValueError("gridN must be even and at least 128")
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    x = np.arange(gridN) * params.Lx / gridN
    return periodic_sl_eigs(conformal_factor(params, x), params.Lx,
                            mode_frequency(params, j), cutoff)


def j_max(params, cutoff):
    """Smallest mode with omega_j^2 >= cutoff * b (all its eigenvalues exceed cutoff)."""
    return math.ceil(np.sqrt(2.0) * params.m * params.b * np.sqrt(cutoff * params.b) / 3.0)


# --- spectra ---------------------------------------------------------------

@dataclass(frozen=True)
class SpectralLine:
    lam: float
    j: int
    x_parity: str
    tau_parity: str
    mult: int
    error_bar: float = 0.0
    raw: float = float("nan")  # fine-grid value before extrapolation

    def to_json(self):
        return {"lambda": self.lam, "j": self.j, "xParity": self.x_parity,
                "tauParity": self.tau_parity, "mult": self.mult,
                "errorBar": self.error_bar}


def tau_parity(x_parity, j):
    sign = (1 if x_parity == "even" else -1) * (-1) ** j
    return "plus" if sign > 0 else "minus"


@dataclass
class Spectrum:
    tag: str
    lines: list
    gridN: int
    tolerance: float
    cutoff: float
    nonorientable: bool = True
    params: object = None

    def tau_even(self):
        return [ln for ln in self.lines if ln.tau_parity == "plus"]

    def tau_odd(self):
        return [ln for ln in self.lines if ln.tau_parity == "minus"]

    def to_json(self):
        return {"tag": self.tag, "gridN": self.gridN, "tolerance": self.tolerance,
                "cutoff": self.cutoff, "lines": [ln.to_json() for ln in self.lines]}


def _mode_lines(params, j, gridN, cutoff):
    x_f = np.arange(gridN) * params.Lx / gridN
    w_f = conformal_factor(params, x_f)
    w_c = w_f[::2]
    omega = mode_frequency(params, j)
    fine = periodic_sl_eigs(w_f, params.Lx, omega, cutoff + DEFAULT_MARGIN)
    count = {"even": sum(par == "even" for _, par in fine),
             "odd": sum(par == "odd" for _, par in fine)}
    coarse = periodic_sl_eigs(w_c, params.Lx, omega, count=count)
    lines = []
    for parity in ("even", "odd"):
        lf = [v for v, par in fine if par == parity]
        lc = [v for v, par in coarse if par == parity]
        for vf, vc in zip(lf, lc):
            ext = vf + (vf - vc) / 3.0
            err = abs(vf - vc) / 3.0 + 1e-12 * max(1.0, abs(vf))
            if ext < cutoff:
                lines.append(SpectralLine(
                    lam=ext, j=j, x_parity=parity, tau_parity=tau_parity(parity, j),
                    mult=1 if j == 0 else 2, error_bar=err, raw=vf))
    return lines


def torus_spectrum(params, cutoff=INDEX_CUTOFF + DEFAULT_MARGIN, gridN=1024):
    """Spectrum of the double cover below ``cutoff``, labelled by glide parity.

    Each eigenvalue is Richardson-extrapolated from grids gridN and gridN/2;
    its error bar is the estimated discretisation error of the gridN value.
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    if gridN < 256 or gridN % 4:
        raise ValueError("gridN must be a multiple of 4 and at least 256")
    modes = range(0, j_max(params, cutoff) + 1)
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        chunks = list(pool.map(lambda j: _mode_lines(params, j, gridN, cutoff), modes))
    lines = sorted((ln for chunk in chunks for ln in chunk),
                   key=lambda ln: (ln.lam, ln.j, ln.x_parity))
    for ln in lines:
        if ln.lam < params.omega(ln.j) ** 2 / params.b - ln.error_bar - 1e-9:
            raise ConvergenceError(f"line {ln} violates the Rayleigh lower bound")
    tol = max((ln.error_bar for ln in lines), default=0.0)
    return Spectrum(tag=f"K_{{{params.n},{params.m}}}", lines=lines, gridN=gridN,
                    tolerance=tol, cutoff=cutoff, nonorientable=True, params=params)


# --- index -------------------------------------------------------------------

@dataclass
class IndexReport:
    beta1: int
    ind0: int
    ind1: int
    ind: int
    multSix: int
    chi: int
    tag: str = ""
    extras: dict = field(default_factory=dict)

    def to_json(self):
        d = asdict(self)
        extras = d.pop("extras")
        d.update(extras)
        return d


def _is_six(line):
    return abs(line.lam - INDEX_CUTOFF) <= line.error_bar


def _is_zero(line):
    return abs(line.lam) <= line.error_bar + ZERO_TOL


def _six_signature(spectrum):
    return sorted((ln.j, ln.x_parity) for ln in spectrum.lines if _is_six(ln))


def classify(spectrum):
    """Index counts of a (Klein bottle) spectrum; see IndexReport."""
    below = [ln for ln in spectrum.lines
             if not _is_six(ln) and ln.lam + ln.error_bar < INDEX_CUTOFF]
    ind0 = sum(ln.mult for ln in below if ln.tau_parity == "plus" and not _is_zero(ln))
    ind1 = sum(ln.mult for ln in below if ln.tau_parity == "minus")
    cover_ind0 = sum(ln.mult for ln in below if not _is_zero(ln))
    mult_six = sum(ln.mult for ln in spectrum.lines if _is_six(ln))
    zeros = [ln for ln in spectrum.lines if _is_zero(ln)]
    return ind0, ind1, cover_ind0, mult_six, zeros


def index_report(params, gridN=1024):
    """Index of K_{n,m}: Ind = beta1 + Ind0 + Ind1 with beta1 = 1.

    When a line sits within ten error bars of 6 the spectrum is recomputed at
    2*gridN; lines within their error bar of 6 must keep the same (j, parity)
    labels across the refinement, else AmbiguityError.
    """
    spec = torus_spectrum(params, INDEX_CUTOFF + DEFAULT_MARGIN, gridN)
    used = gridN
    if any(abs(ln.lam - INDEX_CUTOFF) <= 10.0 * ln.error_bar for ln in spec.lines):
        refined = torus_spectrum(params, INDEX_CUTOFF + DEFAULT_MARGIN, 2 * gridN)
        before, after = _six_signature(spec), _six_signature(refined)
        if before != after:
            changed = sorted(set(before) ^ set(after))
            raise AmbiguityError(
                f"eigenvalue(s) near 6 for K_{{{params.n},{params.m}}} did not stabilise "
                f"between gridN={gridN} and {2 * gridN}: (j, parity) {changed}")
        spec, used = refined, 2 * gridN
    ind0, ind1, cover_ind0, mult_six, zeros = classify(spec)
    beta1, chi = 1, 0
    ind = beta1 + ind0 + ind1
    cover_ind = 2 * 1 + 2 * cover_ind0
    n, m = params.n, params.m
    extras = {
        "gridN": used,
        "tolerance": spec.tolerance,
        "coverInd0": cover_ind0,
        "coverInd": cover_ind,
        "coverInd0Identity": ind0 + ind1 == cover_ind0,
        "coverIndIdentity": 2 * ind == cover_ind,
        "zeroLines": [(ln.j, ln.tau_parity) for ln in zeros],
        "sixModes": [ln.j for ln in spec.lines if _is_six(ln) for _ in range(ln.mult)],
        "ind0LowerBound": 2 * (2 * n + m) // 3 - 2,
        "indLowerBound": 2 * (2 * n + m) // 3,
    }
    report = IndexReport(beta1=beta1, ind0=ind0, ind1=ind1, ind=ind, multSix=mult_six,
                         chi=chi, tag=spec.tag, extras=extras)
    report.spectrum = spec
    return report


# --- explicit eigenfunctions ------------------------------------------------

@dataclass(frozen=True)
class EigenfunctionCheck:
    label: int
    j: int
    x_parity: str
    tau_even: bool
    residual: float


def verify_explicit_eigenfunctions(params, gridN=256):
    """Discrete |Delta g_i - 6 g_i| / max|g_i| for i = 1..7 on the torus grid."""
    if gridN < 128:
        raise ValueError("gridN must be at least 128")
    x, y, hx, hy = torus_grid(params, gridN)
    X, Y = np.meshgrid(x, y, indexing="ij")
    w = conformal_factor(params, x)
    out = []
    rng = np.random.default_rng(7)
    xs, ys = rng.uniform(-params.Lx, params.Lx, 64), rng.uniform(-params.Ly, params.Ly, 64)
    for info in mode_table(params):
        num = {2: 2 * params.n + params.m, 4: params.n + 2 * params.m,
               6: params.n - params.m}.get(info.label - (info.label % 2 == 1), 0)
        if num % 3:
            raise ValueError(f"g_{info.label} has non-integer Fourier mode {num}/3")
        if num // 3 != info.j:
            raise ValueError(f"g_{info.label}: mode {info.j} does not match {num}/3")
        g = g_closed_form(params, info.label, X, Y)
        res = periodic_laplacian(g, w, hx, hy) - 6.0 * g
        glide = g_closed_form(params, info.label, -xs, ys + params.Ly)
        tau_even = bool(np.allclose(glide, g_closed_form(params, info.label, xs, ys),
                                    atol=1e-12))
        out.append(EigenfunctionCheck(info.label, info.j, info.x_parity, tau_even,
                                      float(np.max(np.abs(res)) / np.max(np.abs(g)))))
    return out


# --- first eigenvalue and area ---------------------------------------------

@dataclass(frozen=True)
class Lambda1Report:
    lambda1: float
    error_bar: float
    bound: float
    rayleigh: float
    mean_f: float

    @property
    def holds(self):
        return self.lambda1 + self.error_bar <= self.rayleigh < self.bound


def lambda1_bound(params, gridN=1024, spectrum=None):
    """First positive glide-even eigenvalue against 2 - m^2/(n(n+m)).

    ``rayleigh`` is the Rayleigh quotient of sn(r x) on the double cover; the
    integrals are periodic in x, so the trapezoid rule is spectrally accurate.
    """
    spec = spectrum or torus_spectrum(params, 3.0, gridN)
    positive = [ln for ln in spec.tau_even() if not _is_zero(ln)]
    first = positive[0]
    n, m = params.n, params.m
    bound = 2.0 - m * m / (n * (n + m))
    N = 4096
    x = np.arange(N) * params.Lx / N
    e = jacobi(params.r * x, params.p)
    w = conformal_factor(params, x)
    mean_f = float(np.mean(e.sn * w))
    if abs(mean_f) > 1e-10:
        raise ConvergenceError(f"test function mean {mean_f:g} is not zero")
    rayleigh = float(np.sum((params.r * e.cn * e.dn) ** 2) / np.sum(e.sn**2 * w))
    return Lambda1Report(first.lam, first.error_bar, bound, rayleigh, mean_f)


def gauss_legendre_composite(f, a, b, panels=32, order=20):
    t, wt = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    pts = mid + half * t
    return float(np.sum(half * wt * f(pts)))


@dataclass(frozen=True)
class AreaReport:
    byFormula: float
    byQuadrature: float

    @property
    def rel_diff(self):
        return abs(self.byFormula - self.byQuadrature) / abs(self.byFormula)


def area(params):
    """Area of K_{n,m}, closed form vs. a tensor Gauss-Legendre rule on D."""
    n, m = params.n, params.m
    K, E = complete_K(params.p), complete_E(params.p)
    formula = 4.0 * np.pi * np.sqrt(n) / (3.0 * np.sqrt(n + 2 * m)) * ((n + 2 * m) * E - m * K)
    ty, wy = np.polynomial.legendre.leggauss(4)
    y_nodes = 0.5 * params.Ly * (ty + 1.0)

    def integrand(xs):
        # e^{2u} does not depend on y; the y rule is kept for a genuine 2D sum
        wx = conformal_factor(params, xs)
        return wx * np.sum(0.5 * params.Ly * wy * np.ones_like(y_nodes))

    quad = gauss_legendre_composite(integrand, 0.0, params.Lx)
    return AreaReport(byFormula=float(formula), byQuadrature=quad)


# --- Theorem-A style multiplicity check ----------------------------------------

def distinct_eigenvalues(lines):
    """Cluster positive lines whose error bars overlap; (value, multiplicity)."""
    groups = []
    for ln in sorted(lines, key=lambda l: l.lam):
        if groups and abs(ln.lam - groups[-1][0]) <= ln.error_bar + groups[-1][2] + 1e-9:
            val, mult, err = groups[-1]
            groups[-1] = (val, mult + ln.mult, max(err, ln.error_bar))
        else:
            groups.append((ln.lam, ln.mult, ln.error_bar))
    return [(v, k) for v, k, _ in groups]


def nadirashvili_check(spectrum, chi):
    """m(lambda_i) <= 3 + 2 i - 2 chi for the distinct positive glide-even eigenvalues.

    Only valid for nonorientable surfaces with chi <= 0.
    """
    if not spectrum.nonorientable:
        raise ValueError(f"{spectrum.tag}: multiplicity bound needs a nonorientable surface")
    if chi > 0:
        raise ValueError(f"multiplicity bound needs chi <= 0, got {chi}")
    positive = [ln for ln in spectrum.tau_even() if not _is_zero(ln)]
    for i, (_, mult) in enumerate(distinct_eigenvalues(positive), start=1):
        if mult > 3 + 2 * i - 2 * chi:
            return False
    return True


# --- closed-form benchmarks ---------------------------------------------------

def _line(lam, mult, tau, j=0):
    return SpectralLine(lam=float(lam), j=j, x_parity="even", tau_parity=tau, mult=mult)


def sphere_spectrum(cutoff=INDEX_CUTOFF + DEFAULT_MARGIN):
    lines = [_line(l * (l + 1), 2 * l + 1, "plus") for l in range(0, 10) if l * (l + 1) < cutoff]
    return Spectrum("S2", lines, 0, 0.0, cutoff, nonorientable=False)


def rp2_spectrum(cutoff=INDEX_CUTOFF + DEFAULT_MARGIN):
    """Sphere harmonics split by the antipodal map: even degree on RP^2."""
    lines = [_line(l * (l + 1), 2 * l + 1, "plus" if l % 2 == 0 else "minus")
             for l in range(0, 10) if l * (l + 1) < cutoff]
    return Spectrum("RP2", lines, 0, 0.0, cutoff, nonorientable=True)


def clifford_spectrum(cutoff=INDEX_CUTOFF + DEFAULT_MARGIN, radius=12):
    """Flat torus R^2 / Lambda, Lambda = <(2pi,0), (0,2pi), (2pi/3)(1,1)>.

    Eigenfunctions exp(i k.theta) with k1, k2 integers and k1 + k2 = 0 mod 3;
    eigenvalue g^{ij} k_i k_j = 2 (k1^2 - k1 k2 + k2^2).
    """
    counts = {}
    for k1 in range(-radius, radius + 1):
        for k2 in range(-radius, radius + 1):
            if (k1 + k2) % 3:
                continue
            lam = 2 * (k1 * k1 - k1 * k2 + k2 * k2)
            if lam < cutoff:
                counts[lam] = counts.get(lam, 0) + 1
    lines = [_line(lam, k, "plus") for lam, k in sorted(counts.items())]
    return Spectrum("Clifford", lines, 0, 0.0, cutoff, nonorientable=False)


def _closed_form_report(spectrum, beta1, chi, orientable, genus=0):
    below = [ln for ln in spectrum.lines if ln.lam < INDEX_CUTOFF]
    ind0 = sum(ln.mult for ln in below if ln.lam > 0 and ln.tau_parity == "plus")
    if orientable:
        ind1 = ind0
        ind = 2 * genus + 2 * ind0
    else:
        ind1 = sum(ln.mult for ln in below if ln.tau_parity == "minus")
        ind = beta1 + ind0 + ind1
    assert ind == beta1 + ind0 + ind1
    six = sum(ln.mult for ln in spectrum.lines if ln.lam == INDEX_CUTOFF
              and ln.tau_parity == "plus")
    positive = [ln.lam for ln in spectrum.lines if ln.lam > 0 and ln.tau_parity == "plus"]
    extras = {"lambda1": min(positive), "lambda1Mult": sum(
        ln.mult for ln in spectrum.lines if ln.lam == min(positive) and ln.tau_parity == "plus")}
    return IndexReport(beta1=beta1, ind0=ind0, ind1=ind1, ind=ind, multSix=six, chi=chi,
                       tag=spectrum.tag, extras=extras)


def benchmark_reports():
    """Closed-form index reports for RP^2, S^2 and the Clifford torus."""
    return {
        "RP2": _closed_form_report(rp2_spectrum(), beta1=0, chi=1, orientable=False),
        "S2": _closed_form_report(sphere_spectrum(), beta1=0, chi=2, orientable=True),
        "Clifford": _closed_form_report(clifford_spectrum(), beta1=2, chi=0,
                                        orientable=True, genus=1),
    }
