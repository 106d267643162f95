# Conjugation action of SU(2) on itself.  The section is the maximal torus
# exp(x X3), 0 < x < 2 pi, and invariant functions are class functions.
# The reduced operator on the trivial representation is d^2/dx^2 + 1/4 and its
# eigenfunctions are delta^{1/2} chi_n = 2 sin((n + 1) x / 2), eigenvalue -n(n+2)/4.
import numpy as np

from polarqhr import geometry, lie, reduce, spectral

scen = geometry.scenario("su2-conj")
rep = geometry.representation_for(scen, "trivial")

# density of the orbit volume, and the effective potential it produces
x = np.linspace(0.5, 5.5, 6)[:, None]
print("delta(x)  :", geometry.densities(scen, lie.dual_bases(scen.algebra), x).round(6))
print("v_eff(x)  :", reduce.effective_potentials(scen, x).round(12))

op = reduce.assemble(scen, rep, reduce.GridConfig(0.0, 2 * np.pi, N=4000))
report = spectral.eigen_spectrum(op, k=6)
oracle = spectral.closed_form_spectrum("su2-conj", "trivial", 6)
for lam, ref in zip(report.eigenvalues, oracle):
    print(f"{lam: .10f}   casimir {ref: .4f}")

# the ground state is 2 sin(x/2) up to normalization and sign
v = report.eigenvectors[:, 0]
g = 2 * np.sin(op.points[:, 0] / 2)
g = g / np.sqrt(op.cell_volume * np.sum(g * g))
print("ground state vs 2 sin(x/2):", np.max(np.abs(np.abs(v) - g)))

# higher spin: the 1/sin^2 barrier pushes every level down
for label in ("spin:1", "spin:2", "spin:3"):
    rep_j = geometry.representation_for(scen, label)
    lam = spectral.eigen_spectrum(reduce.assemble(scen, rep_j, reduce.GridConfig(0.0, 2 * np.pi, N=2000)), 3)
    print(label, lam.eigenvalues.round(5), "oracle", spectral.closed_form_spectrum("su2-conj", label, 3))
