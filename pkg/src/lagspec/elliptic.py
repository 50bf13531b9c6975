"""Jacobi elliptic functions and complete elliptic integrals.

Every function here takes the *modulus* ``p`` (not the parameter ``m = p**2``).
K and E come from the arithmetic-geometric mean; sn, cn, dn from the
amplitude obtained by the descending AGM (Gauss) recursion after reducing the
argument modulo ``4K``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_MAX_AGM_STEPS = 40


@dataclass(frozen=True)
class EllipticEval:
    x: np.ndarray
    p: float
    sn: np.ndarray
    cn: np.ndarray
    dn: np.ndarray


@dataclass(frozen=True)
class CompleteIntegrals:
    p: float
    K: float
    E: float


def _check_modulus(p, allow_one=False):
    p = float(p)
    if not np.isfinite(p) or p < 0.0 or p > 1.0 or (p == 1.0 and not allow_one):
        bound = "[0, 1]" if allow_one else "[0, 1)"
        raise DomainError(f"elliptic modulus p={p!r} outside {bound}")
    return p


def _agm_sequence(p):
    """Return the AGM triples (a_n, b_n, c_n) started from (1, p', p)."""
    a, b, c = 1.0, np.sqrt((1.0 - p) * (1.0 + p)), p
    seq = [(a, b, c)]
    for _ in range(_MAX_AGM_STEPS):
        if abs(c) <= 1e-17 * a:
            break
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        seq.append((a, b, c))
    return seq


def complete_K(p):
    """Complete elliptic integral of the first kind, K(p) for 0 <= p < 1."""
    p = _check_modulus(p)
    a = _agm_sequence(p)[-1][0]
    return np.pi / (2.0 * a)


def complete_E(p):
    """Complete elliptic integral of the second kind, E(p) for 0 <= p <= 1."""
    p = _check_modulus(p, allow_one=True)
    if p == 1.0:
        return 1.0
    seq = _agm_sequence(p)
    K = np.pi / (2.0 * seq[-1][0])
    s = sum(2.0 ** (k - 1) * c * c for k, (_, _, c) in enumerate(seq))
    return K * (1.0 - s)


def complete_integrals(p):
    return CompleteIntegrals(p=float(p), K=complete_K(p), E=complete_E(p))


def _reduce(x, period):
    return x - period * np.round(x / period)


def amplitude(x, p):
    """Jacobi amplitude am(x, p), with x reduced into [-2K, 2K] first.

    The reduction drops whole multiples of ``2*pi`` from the amplitude, so the
    returned value is the amplitude of the reduced argument.
    """
    p = _check_modulus(p)
    x = np.asarray(x, dtype=float)
    seq = _agm_sequence(p)
    K = np.pi / (2.0 * seq[-1][0])
    u = _reduce(x, 4.0 * K)
    n = len(seq) - 1
    a_n = seq[-1][0]
    phi = (2.0 ** n) * a_n * u
    for k in range(n, 0, -1):
        a_k, _, c_k = seq[k]
        phi = 0.5 * (phi + np.arcsin((c_k / a_k) * np.sin(phi)))
    return phi


def jacobi(x, p):
    """Evaluate (sn, cn, dn)(x, p) for real ``x`` (scalar or array)."""
    p = _check_modulus(p)
    x = np.asarray(x, dtype=float)
    phi = amplitude(x, p)
    sn = np.sin(phi)
    cn = np.cos(phi)
    # dn >= sqrt(1 - p^2) > 0, so the square root loses no sign information
    dn = np.sqrt((1.0 - p * sn) * (1.0 + p * sn))
    return EllipticEval(x=x, p=p, sn=sn, cn=cn, dn=dn)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def jacobi_epsilon(u, p):
    """Jacobi epsilon function E(u) = integral of dn^2 from 0 to u.

    Uses E(u + 2K) = E(u) + 2E to map u into [-K, K] and a 64-point
    Gauss-Legendre rule on the remainder.
    """
    p = _check_modulus(p)
    u = np.asarray(u, dtype=float)
    K = complete_K(p)
    E = complete_E(p)
    k = np.round(u / (2.0 * K))
    ur = u - 2.0 * K * k
    t = 0.5 * ur[..., None] * (_GL_NODES + 1.0)
    dn = jacobi(t, p).dn
    partial = 0.5 * ur * np.sum(_GL_WEIGHTS * dn * dn, axis=-1)
    out = 2.0 * E * k + partial
    return out if out.ndim else float(out)
