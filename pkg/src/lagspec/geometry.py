"""The immersion of K_{n,m} into CP^2 through its horizontal lift to S^5.

Points of CP^2 are handled as unit vectors of C^3; two lifts describe the
same point when |h(z, w)| = 1.  All derivatives of the lift are analytic;
finite differences appear only in the grid-based residuals.

Sign convention: the Laplacian reported anywhere in this package is
``-div grad`` (nonnegative spectrum), so an eigenfunction of eigenvalue 6
satisfies ``Delta f = 6 f``.
"""

from dataclasses import dataclass, replace

import numpy as np

from .elliptic import jacobi
from .family import conformal_factor

# real representation of C^3: (Re z1, Re z2, Re z3, Im z1, Im z2, Im z3)
J6 = np.block([[np.zeros((3, 3)), -np.eye(3)], [np.eye(3), np.zeros((3, 3))]])


def hermitian(z, w):
    """h(z, w) = sum z_i conj(w_i) over the last axis."""
    return np.sum(z * np.conj(w), axis=-1)


def inner(z, w):
    """Real inner product <z, w> = Re h(z, w)."""
    return np.real(hermitian(z, w))


def kahler(v, w):
    """omega(v, w) = <J v, w>."""
    return inner(1j * v, w)


def to_real(z):
    z = np.asarray(z)
    return np.concatenate([z.real, z.imag], axis=-1)


def to_complex(v):
    v = np.asarray(v)
    return v[..., :3] + 1j * v[..., 3:]


def horizontal_part(v, z):
    """Remove the components of v along z and J z (|z| = 1 assumed)."""
    iz = 1j * z
    return v - inner(v, z)[..., None] * z - inner(v, iz)[..., None] * iz


@dataclass(frozen=True)
class LiftCoefficients:
    """Amplitudes and y-frequencies of the three lift components.

    Component k is ``amps[k] * phi_k(r x) * exp(1j * freqs[k] * y)`` with
    ``phi = (dn, cn, sn)``.
    """

    amps: tuple
    freqs: tuple
    r: float
    p: float
    normalize: bool = False  # rescale the lift onto S^5 pointwise


def lift_coefficients(params):
    n, m, b = params.n, params.m, params.b
    s = np.sqrt(2.0) * m * b
    return LiftCoefficients(
        amps=(np.sqrt(params.lam2), np.sqrt(params.mu2), np.sqrt(params.nu2)),
        freqs=((n + m) / s, -n / s, -1.0 / (np.sqrt(2.0) * b)),
        r=params.r,
        p=params.p,
    )


def perturbed(coeffs, freq_shift=(0.0, 0.0, 0.0), amp_scale=(1.0, 1.0, 1.0)):
    """Copy of ``coeffs`` with shifted frequencies / scaled amplitudes.

    A changed amplitude leaves S^5, so such lifts are renormalised pointwise
    (by ``immersion_lift`` only; the analytic-derivative residuals do not).
    """
    return replace(
        coeffs,
        amps=tuple(a * s for a, s in zip(coeffs.amps, amp_scale)),
        freqs=tuple(f + d for f, d in zip(coeffs.freqs, freq_shift)),
        normalize=coeffs.normalize or any(s != 1.0 for s in amp_scale),
    )


@dataclass(frozen=True)
class LiftPoint:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray  # shape (..., 3), complex


def _profiles(coeffs, x, order):
    """(dn, cn, sn)(r x) and their first/second x-derivatives."""
    r, p = coeffs.r, coeffs.p
    e = jacobi(np.asarray(x, dtype=float) * r, p)
    sn, cn, dn = e.sn, e.cn, e.dn
    out = [np.stack([dn, cn, sn], axis=-1)]
    if order >= 1:
        out.append(r * np.stack([-p * p * sn * cn, -sn * dn, cn * dn], axis=-1))
    if order >= 2:
        out.append(r * r * np.stack([
            -p * p * dn * (cn * cn - sn * sn),
            -cn * (dn * dn - p * p * sn * sn),
            -sn * (dn * dn + p * p * cn * cn),
        ], axis=-1))
    return out


def _lift_jet(params, x, y, coeffs, order):
    coeffs = coeffs or lift_coefficients(params)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    amps = np.asarray(coeffs.amps)
    freqs = np.asarray(coeffs.freqs)
    phase = np.exp(1j * y[..., None] * freqs)
    prof = _profiles(coeffs, x, order)
    z = amps * prof[0] * phase
    jet = {"z": z}
    if order >= 1:
        jet["zx"] = amps * prof[1] * phase
        jet["zy"] = 1j * freqs * z
    if order >= 2:
        jet["zxx"] = amps * prof[2] * phase
        jet["zyy"] = -(freqs**2) * z
    return jet


def immersion_lift(params, x, y, coeffs=None):
    """Unit lift z(x, y) in C^3 of the immersion at chart point (x, y)."""
    z = _lift_jet(params, x, y, coeffs, 0)["z"]
    if coeffs is not None and coeffs.normalize:
        z = z / np.linalg.norm(z, axis=-1, keepdims=True)
    return LiftPoint(x=np.asarray(x), y=np.asarray(y), z=z)


def lift_derivatives(params, x, y, coeffs=None):
    """(z, z_x, z_y) with analytic partial derivatives."""
    jet = _lift_jet(params, x, y, coeffs, 1)
    return jet["z"], jet["zx"], jet["zy"]


def unit_residual(params, x, y, coeffs=None):
    z = immersion_lift(params, x, y, coeffs).z
    return np.abs(np.linalg.norm(z, axis=-1) - 1.0)


def projective_wellposedness(params, x, y, coeffs=None):
    """Residuals 1 - |h| between z(x, y) and its images under the deck group."""
    z = immersion_lift(params, x, y, coeffs).z
    zt = immersion_lift(params, np.asarray(x) + params.Lx, y, coeffs).z
    zg = immersion_lift(params, -np.asarray(x), np.asarray(y) + params.Ly, coeffs).z
    return 1.0 - np.abs(hermitian(z, zt)), 1.0 - np.abs(hermitian(z, zg))


def horizontality_residual(params, x, y, coeffs=None):
    """(<z_x, J z>, <z_y, J z>); both vanish for a horizontal lift."""
    z, zx, zy = lift_derivatives(params, x, y, coeffs)
    return inner(zx, 1j * z), inner(zy, 1j * z)


def horizontality_residual_fd(params, x, y, h=1e-5, coeffs=None):
    lift = lambda a, c: immersion_lift(params, a, c, coeffs).z  # noqa: E731
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = lift(x, y)
    zx = (lift(x + h, y) - lift(x - h, y)) / (2 * h)
    zy = (lift(x, y + h) - lift(x, y - h)) / (2 * h)
    return inner(zx, 1j * z), inner(zy, 1j * z)


def pullback_metric(params, x, y, coeffs=None):
    """Induced Fubini-Study metric in the chart, shape (..., 2, 2)."""
    z, zx, zy = lift_derivatives(params, x, y, coeffs)
    hx, hy = horizontal_part(zx, z), horizontal_part(zy, z)
    gxx, gxy, gyy = inner(hx, hx), inner(hx, hy), inner(hy, hy)
    return np.stack([np.stack([gxx, gxy], -1), np.stack([gxy, gyy], -1)], -2)


def lagrangian_residual(params, x, y, coeffs=None):
    """omega on the horizontal parts of the two coordinate derivatives."""
    z, zx, zy = lift_derivatives(params, x, y, coeffs)
    return kahler(horizontal_part(zx, z), horizontal_part(zy, z))


def minimality_residual_analytic(params, x, y, coeffs=None):
    """|e^{-2u}(z_xx + z_yy) + 2 z| pointwise, with exact derivatives."""
    jet = _lift_jet(params, x, y, coeffs, 2)
    w = conformal_factor(params, np.broadcast_to(x, jet["z"].shape[:-1]))
    res = (jet["zxx"] + jet["zyy"]) / w[..., None] + 2.0 * jet["z"]
    return np.linalg.norm(res, axis=-1)


def torus_grid(params, gridN):
    """Cell-corner grid of the orientable double cover [0, Lx) x [0, 2 Ly)."""
    hx = params.Lx / gridN
    hy = params.LyTorus / gridN
    x = np.arange(gridN) * hx
    y = np.arange(gridN) * hy
    return x, y, hx, hy


def minimality_residual(params, gridN, coeffs=None):
    """max over the torus grid of |e^{-2u}(D_xx + D_yy) z + 2 z|.

    D_xx, D_yy are second-order central differences; the stencil neighbours
    across the period boundary are evaluated from the closed form, which is
    the same as periodic wrapping up to the constant phase of the lift.
    """
    x, y, hx, hy = torus_grid(params, gridN)
    xe = np.concatenate([[x[0] - hx], x, [x[-1] + hx]])
    ye = np.concatenate([[y[0] - hy], y, [y[-1] + hy]])
    X, Y = np.meshgrid(xe, ye, indexing="ij")
    Z = immersion_lift(params, X, Y, coeffs).z
    c = Z[1:-1, 1:-1]
    lap = (Z[2:, 1:-1] - 2 * c + Z[:-2, 1:-1]) / hx**2 \
        + (Z[1:-1, 2:] - 2 * c + Z[1:-1, :-2]) / hy**2
    w = conformal_factor(params, x)[:, None, None]
    return float(np.max(np.linalg.norm(lap / w + 2.0 * c, axis=-1)))


def clifford_lift(theta1, theta2):
    """Horizontal lift of the Clifford torus; metric (2/3)(dt1^2 + dt1 dt2 + dt2^2)."""
    t1, t2 = np.broadcast_arrays(np.asarray(theta1, float), np.asarray(theta2, float))
    return np.stack([np.exp(1j * t1), np.exp(1j * t2), np.exp(-1j * (t1 + t2))], -1) / np.sqrt(3.0)


CLIFFORD_METRIC = np.array([[2.0, 1.0], [1.0, 2.0]]) / 3.0
_CLIFFORD_WAVES = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]])


def clifford_minimality_residual(theta1, theta2):
    """|-g^{ij} d_i d_j z - 2 z| for the Clifford lift, exact derivatives."""
    z = clifford_lift(theta1, theta2)
    ginv = np.linalg.inv(CLIFFORD_METRIC)
    eig = np.einsum("ki,ij,kj->k", _CLIFFORD_WAVES, ginv, _CLIFFORD_WAVES)
    # d_i d_j z_k = -k_i k_j z_k, so -g^{ij} d_i d_j z_k = eig_k z_k
    return np.linalg.norm(eig * z - 2.0 * z, axis=-1)


# --- su(3) test functions ----------------------------------------------------

def _gell_mann():
    s3 = 1.0 / np.sqrt(3.0)
    mats = np.zeros((8, 3, 3), dtype=complex)
    mats[0][0, 1] = mats[0][1, 0] = 1
    mats[1][0, 1], mats[1][1, 0] = -1j, 1j
    mats[2][0, 0], mats[2][1, 1] = 1, -1
    mats[3][0, 2] = mats[3][2, 0] = 1
    mats[4][0, 2], mats[4][2, 0] = -1j, 1j
    mats[5][1, 2] = mats[5][2, 1] = 1
    mats[6][1, 2], mats[6][2, 1] = -1j, 1j
    mats[7] = s3 * np.diag([1, 1, -2])
    return mats


def real_representation(M):
    """6x6 real matrix of the complex-linear map z -> M z."""
    M = np.asarray(M, dtype=complex)
    return np.block([[M.real, -M.imag], [M.imag, M.real]])


def su3_basis():
    """Eight generators A = real form of i * (Gell-Mann matrix)."""
    return [real_representation(1j * g) for g in _gell_mann()]


def validate_generator(A, tol=1e-12):
    A = np.asarray(A, dtype=float)
    if A.shape != (6, 6):
        raise ValueError(f"generator must be 6x6, got {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A))))
    if np.max(np.abs(A + A.T)) > tol * scale:
        raise ValueError("generator is not antisymmetric")
    if np.max(np.abs(A @ J6 - J6 @ A)) > tol * scale:
        raise ValueError("generator does not commute with J")
    if abs(np.trace(A @ J6)) > tol * scale:
        raise ValueError("generator has Trace(AJ) != 0")
    return A


def ambient_test_function(A, z):
    """F_A(z) = <A z, J z> for lifts z of shape (..., 3)."""
    M = to_complex(np.asarray(A)[:, :3].T).T  # complex form of A
    return inner(z @ M.T, 1j * z)


def su3_test_function(A, params, x, y):
    """f_A = F_A composed with the immersion, at chart points (x, y)."""
    A = validate_generator(A)
    return ambient_test_function(A, immersion_lift(params, x, y).z)


def ambient_hessian(A, z, v, w):
    """-2 F_A <v, w> + 2 <A v, J w> for horizontal v, w at the lift z."""
    M = to_complex(np.asarray(A)[:, :3].T).T
    return -2.0 * ambient_test_function(A, z) * inner(v, w) + 2.0 * inner(v @ M.T, 1j * w)


def periodic_laplacian(values, w, hx, hy):
    """-w^{-1}(D_xx + D_yy) on a doubly periodic grid (axis 0 = x)."""
    dxx = (np.roll(values, -1, 0) - 2 * values + np.roll(values, 1, 0)) / hx**2
    dyy = (np.roll(values, -1, 1) - 2 * values + np.roll(values, 1, 1)) / hy**2
    return -(dxx + dyy) / w[:, None]


def su3_eigen_residuals(params, gridN):
    """max|Delta f_A - 6 f_A| / max|f_A| on the torus grid, per basis generator."""
    x, y, hx, hy = torus_grid(params, gridN)
    X, Y = np.meshgrid(x, y, indexing="ij")
    z = immersion_lift(params, X, Y).z
    w = conformal_factor(params, x)
    out = []
    for A in su3_basis():
        f = ambient_test_function(A, z)
        res = periodic_laplacian(f, w, hx, hy) - 6.0 * f
        out.append(float(np.max(np.abs(res)) / np.max(np.abs(f))))
    return out


def su3_sample_rank(params, gridN=48, rtol=1e-8):
    """Numerical rank of the eight sampled functions f_A, and singular values."""
    x, y, _, _ = torus_grid(params, gridN)
    X, Y = np.meshgrid(x, y, indexing="ij")
    z = immersion_lift(params, X, Y).z
    rows = np.array([ambient_test_function(A, z).ravel() for A in su3_basis()])
    s = np.linalg.svd(rows, compute_uv=False)
    return int(np.sum(s > rtol * s[0])), s


def su3_grid_samples(params, A, gridN):
    """(X, Y, f_A) on the torus grid, for CSV export."""
    x, y, _, _ = torus_grid(params, gridN)
    X, Y = np.meshgrid(x, y, indexing="ij")
    return X, Y, su3_test_function(A, params, X, Y)
