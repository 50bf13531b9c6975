"""Re-derive the headline numbers for K_{5,2} and print a short report.

Covers the geometry residuals, the multiplicity of the eigenvalue 6, the index
bounds, the first eigenvalue bound, the area and the nodal counts.

    python3 scripts/reproduce_claims.py
"""
import numpy as np

from lagspec import geometry
from lagspec.family import derive_params
from lagspec.nodal import nodal_report
from lagspec.spectral import area, index_report, lambda1_bound, nadirashvili_check


def main():
    P = derive_params(5, 2)
    rng = np.random.default_rng(0)
    x = rng.uniform(0, P.Lx, 1000)
    y = rng.uniform(0, P.LyTorus, 1000)
    print(f"K_(5,2): b={P.b:.12f} r={P.r:.12f} p={P.p:.12f} Lx={P.Lx:.12f} Ly={P.Ly:.12f}")
    print(f"  unit-lift residual   {np.max(geometry.unit_residual(P, x, y)):.2e}")
    print(f"  Lagrangian residual  {np.max(np.abs(geometry.lagrangian_residual(P, x, y))):.2e}")
    m256 = geometry.minimality_residual(P, 256)
    m512 = geometry.minimality_residual(P, 512)
    print(f"  minimality residual  {m512:.2e} (order ratio {m256 / m512:.3f})")

    r = index_report(P, 2048)
    lam = lambda1_bound(P, spectrum=r.spectrum)
    print(f"  eigenvalue 6: multiplicity {r.multSix}, modes {r.extras['sixModes']}")
    print(f"  Ind0={r.ind0} Ind1={r.ind1} Ind={r.ind} "
          f"(lower bounds {r.extras['ind0LowerBound']}, {r.extras['indLowerBound']})")
    print(f"  lambda1={lam.lambda1:.8f} +- {lam.error_bar:.1e} < {lam.bound:.8f}")
    print(f"  multiplicity bound holds: {nadirashvili_check(r.spectrum, r.chi)}")
    a = area(P)
    print(f"  area {a.byFormula:.12f} (quadrature relative gap {a.rel_diff:.1e})")
    nr = nodal_report(P)
    print(f"  nodal counts {nr.counts} expected {nr.expected} torus g1 {nr.torus_g1}")


if __name__ == "__main__":
    main()
