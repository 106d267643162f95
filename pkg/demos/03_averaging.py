# The Haar average (PF)(y) = int rho(g) F(g^-1 y) dg projects V-valued functions
# onto equivariant ones.  Here: U(1) on the plane with charge 2, where the
# quadrature is exact on polynomial angular dependence.
import numpy as np

from polarqhr import equivariant as eq
from polarqhr import geometry, lie

scen = geometry.scenario("u1-plane")
rep = geometry.representation_for(scen, "charge:2")
quad = lie.haar_quadrature("U(1)", 16)
rng = np.random.default_rng(0)

F = eq.polynomial_gaussian_sample(rng, 2, 1, degree=3)
nodes = eq.group_nodes(scen, rep, quad)


def PF(ys):
    return eq.project(scen, rep, quad, F, ys, nodes)


Y = rng.normal(size=(5, 2))
params = scen.group.random_params(rng, 5)
print("defect of F :", eq.equivariance_defect(scen, rep, F, Y, params))
print("defect of PF:", eq.equivariance_defect(scen, rep, PF, Y, params))
print("P(PF) - PF  :", np.abs(eq.project(scen, rep, quad, PF, Y, nodes) - PF(Y)).max())

# a constant has no charge-2 component
const = eq.project(scen, rep, quad, lambda ys: np.ones((len(ys), 1)), Y, nodes)
print("P(const)    :", np.abs(const).max())

# on SU(2) the same projector acts on matrix-element coefficients
su2 = geometry.scenario("su2-conj")
rep1 = geometry.representation_for(su2, "spin:1")
q2 = lie.haar_quadrature("SU(2)", 12)
G = eq.matrix_element_sample(rng, "su2", ["spin:1/2", "spin:1"], 3)
PG = G.averaged(su2, rep1, q2)
print("|G|^2, |PG|^2, <PG, G>:", G.inner(G).real, PG.inner(PG).real, PG.inner(G).real)
