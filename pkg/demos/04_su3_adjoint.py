# Conjugation on SU(3), adjoint representation.  The section is the fundamental
# alcove of the maximal torus (two dimensions) and V^K is the Cartan subalgebra,
# so the spin term is a 2 x 2 matrix at every node.  No closed-form spectrum is
# known here; only properties are checked.
import numpy as np

from polarqhr import equivariant as eq
from polarqhr import geometry, lie, reduce, spectral

scen = geometry.scenario("su3-conj")
rep = geometry.representation_for(scen, "adjoint")
inv = eq.invariant_vectors(rep, scen.algebra)
print("dim V^K =", inv.dim_VK)

x = np.array([[1.0, 2.0], [2.5, 2.2]])
print("v_eff on the alcove:", reduce.effective_potentials(scen, x))

dual = lie.dual_bases(scen.algebra)
S = eq.spin_coupling(rep, inv, geometry.inertia_matrices(scen, dual, x[0]), dual)
print("spin term at", x[0], "\n", S.real.round(6))

op = reduce.assemble(scen, rep, reduce.GridConfig(N=40))
print("nodes kept in the alcove:", op.n_nodes, " matrix size:", op.shape[0])
report = spectral.eigen_spectrum(op, k=6)
print("top eigenvalues:", report.eigenvalues.round(5))
print("max residual   :", report.max_residual)

# the same spectrum with the invariant form scaled by 3
op3 = reduce.assemble(scen.with_algebra(scen.algebra.rescaled(3.0)), rep, reduce.GridConfig(N=40))
print("B -> 3B change :", np.abs(spectral.eigen_spectrum(op3, k=6).eigenvalues - report.eigenvalues).max())
