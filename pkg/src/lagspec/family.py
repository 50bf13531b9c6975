"""Admissible (n, m) pairs and the constants of the Klein bottles K_{n,m}.

The metric of K_{n,m} in the chart (x, y) is ``e^{2u(x)} (dx^2 + dy^2)`` with

    e^{2u(x)} = b (1 - q^2 sn^2(r x, p)),

and the bottle is the quotient of the plane by the translation
``(x, y) -> (x + Lx, y)`` and the glide ``(x, y) -> (-x, y + Ly)``.
"""

from dataclasses import asdict, dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .elliptic import complete_K, jacobi
from .errors import AdmissibilityError

MAX_INDEX = 10**6


def admissibility_violation(n, m):
    """Return the first violated admissibility clause, or None."""
    if isinstance(n, bool) or isinstance(m, bool) or not isinstance(n, (int, np.integer)) \
            or not isinstance(m, (int, np.integer)):
        return "n and m must be integers"
    n, m = int(n), int(m)
    if m <= 0:
        return "m must be positive"
    if m >= n:
        return "m < n required"
    if n > MAX_INDEX:
        return f"n must not exceed {MAX_INDEX}"
    g = gcd(n, m)
    if g != 1:
        return f"gcd(n,m)={g}"
    if n % 2 == 0:
        return "n must be odd"
    if (2 * n + m) % 6 != 0:
        return f"2n+m={2 * n + m} is not a multiple of 6"
    return None


def is_admissible(n, m):
    return admissibility_violation(n, m) is None


def enumerate_admissible(max_n):
    """All admissible pairs with n <= max_n, in lexicographic order."""
    return [(n, m) for n in range(1, max_n + 1) for m in range(1, n)
            if is_admissible(n, m)]


@dataclass(frozen=True)
class KleinBottleParams:
    n: int
    m: int
    b: float
    q2: float
    r: float
    p: float
    lam2: float
    mu2: float
    nu2: float
    K: float
    Lx: float
    Ly: float
    LyTorus: float

    @property
    def b3(self):
        return Fraction(self.n * (self.n + self.m), 2 * self.m * self.m)

    @property
    def p2(self):
        return Fraction(self.n * self.n - self.m * self.m, self.n * (self.n + 2 * self.m))

    def omega(self, j):
        """y-frequency of Fourier mode ``j`` on the orientable double cover."""
        return 3.0 * j / (np.sqrt(2.0) * self.m * self.b)

    def to_json(self):
        keys = ("n", "m", "b", "q2", "r", "p", "lam2", "mu2", "nu2", "Lx", "Ly")
        d = asdict(self)
        return {k: d[k] for k in keys}


def derive_params(n, m):
    """Build the constants of K_{n,m}; rejects inadmissible pairs."""
    clause = admissibility_violation(n, m)
    if clause is not None:
        raise AdmissibilityError(n, m, clause)
    n, m = int(n), int(m)
    b3 = Fraction(n * (n + m), 2 * m * m)
    b = float(b3) ** (1.0 / 3.0)
    # one Newton step polishes the floating cube root
    b -= (b**3 - float(b3)) / (3.0 * b * b)
    p = float(np.sqrt(float(Fraction(n * n - m * m, n * (n + 2 * m)))))
    r = float(np.sqrt(n * (n + 2 * m) / (2.0 * m * m))) / b
    K = float(complete_K(p))
    Ly = float(np.sqrt(2.0) * m * b * np.pi / 3.0)
    return KleinBottleParams(
        n=n, m=m, b=b,
        q2=float(Fraction(n - m, n)),
        r=r, p=p,
        lam2=float(Fraction(n, 2 * n + m)),
        mu2=float(Fraction(n + m, 2 * n + m)),
        nu2=float(Fraction(n + m, n + 2 * m)),
        K=K,
        Lx=4.0 * K / r,
        Ly=Ly,
        LyTorus=2.0 * Ly,
    )


def sqrt_one_plus_8b3(n, m):
    """sqrt(1 + 8 b^3) as an exact rational, or None if it is irrational."""
    s = 1 + 8 * Fraction(n * (n + m), 2 * m * m)
    num, den = s.numerator, s.denominator
    rn, rd = _isqrt_exact(num), _isqrt_exact(den)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def _isqrt_exact(k):
    from math import isqrt
    s = isqrt(k)
    return s if s * s == k else None


def r2_from_b(b):
    """r^2 as a function of b alone, from the closed-form ODE solution."""
    return b - (1.0 - np.sqrt(1.0 + 8.0 * b**3)) / (4.0 * b * b)


def q2_from_b(b):
    return 1.0 - (1.0 + np.sqrt(1.0 + 8.0 * b**3)) / (4.0 * b**3)


def conformal_factor(params, x):
    """e^{2u(x)} = b (1 - q^2 sn^2(r x))."""
    sn = jacobi(np.asarray(x, dtype=float) * params.r, params.p).sn
    return params.b * (1.0 - params.q2 * sn * sn)


def log_factor_derivatives(params, x):
    """Return (u, u', u'') at ``x`` from the closed form, analytically."""
    x = np.asarray(x, dtype=float)
    e = jacobi(x * params.r, params.p)
    b, q2, r = params.b, params.q2, params.r
    w = b * (1.0 - q2 * e.sn**2)
    # w' = -2 b q2 r sn cn dn,  w'' from d/dx of sn cn dn
    s1 = e.sn * e.cn * e.dn
    d_s1 = r * (e.cn**2 * e.dn**2 - e.sn**2 * e.dn**2 - params.p**2 * e.sn**2 * e.cn**2)
    w1 = -2.0 * b * q2 * r * s1
    w2 = -2.0 * b * q2 * r * d_s1
    u = 0.5 * np.log(w)
    u1 = 0.5 * w1 / w
    u2 = 0.5 * (w2 / w - (w1 / w) ** 2)
    return u, u1, u2


def ode_residual(params, x):
    """u'' + e^{2u} - e^{-4u} for the closed-form u; vanishes identically."""
    u, _, u2 = log_factor_derivatives(params, x)
    return u2 + np.exp(2.0 * u) - np.exp(-4.0 * u)


def ode_residual_fd(params, x, h):
    """Same residual with u'' from a 3-point central difference of step h."""
    x = np.asarray(x, dtype=float)
    u = [0.5 * np.log(conformal_factor(params, x + s * h)) for s in (-1.0, 0.0, 1.0)]
    u2 = (u[0] - 2.0 * u[1] + u[2]) / (h * h)
    return u2 + np.exp(2.0 * u[1]) - np.exp(-4.0 * u[1])


@dataclass(frozen=True)
class FundamentalDomain:
    Lx: float
    Ly: float
    LyTorus: float

    def glide(self, x, y):
        """The deck glide (x, y) -> (-x, y + Ly)."""
        return -np.asarray(x), np.asarray(y) + self.Ly

    def translate(self, x, y):
        return np.asarray(x) + self.Lx, np.asarray(y)

    def glue_top_edge(self, x):
        """Point of the bottom edge identified with (x, Ly)."""
        return self.Lx - np.asarray(x), 0.0


def fundamental_domain(params):
    return FundamentalDomain(Lx=params.Lx, Ly=params.Ly, LyTorus=params.LyTorus)
