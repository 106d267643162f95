# Rotations of R^3.  Along the ray x -> (0, 0, x) the orbits are spheres, so
# delta = x^2 and the effective potential vanishes.  On the weight-zero line of
# spin l the spin term is the centrifugal barrier -l(l+1)/x^2, and with a
# Dirichlet wall at x = R the eigenvalues are -(z/R)^2 with z the zeros of j_l.
import numpy as np

from polarqhr import geometry, reduce, spectral

scen = geometry.scenario("so3-space")
R = 20.0

for ell in (0, 1, 2):
    label = "trivial" if ell == 0 else f"spin:{ell}"
    rep = geometry.representation_for(scen, label)
    zeros = spectral.spherical_bessel_zeros(ell, 5)
    for order in (2, 4):
        op = reduce.assemble(scen, rep, reduce.GridConfig(0.0, R, N=4000, order=order))
        report = spectral.eigen_spectrum(op, k=5)
        cmp = spectral.compare_oracle(report, -(zeros / R) ** 2)
        print(f"l = {ell}, stencil order {order}: max rel err {cmp.rel_err.max():.2e}")

# observed convergence order of the second-order stencil
rep = geometry.representation_for(scen, "spin:1")
study = spectral.convergence_study(scen, rep, [500, 1000, 2000], k=3, grid=reduce.GridConfig(0.0, R))
print("observed orders:", study.convergence_table.orders.round(3))
