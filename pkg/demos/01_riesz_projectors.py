"""
Riesz projectors of a non-normal matrix
=======================================

A circle around one eigenvalue turns the resolvent into the spectral
projector onto its generalized eigenspace. Here we build a matrix with a
Jordan block and a tunable condition number and check the projector algebra.
"""

import numpy as np

from rieszlab import CirclePath, build_model, local_part, model_projectors, riesz_projector
from rieszlab.numerics import op_norm

# eigenvalues 2i (one 2x2 Jordan block), -1i and 5i, similarity with condition 10
model = build_model([(2, [2]), (-1, [1]), (5, [1])], kappa=10.0, seed=0)
a = model.A
print("eigenvalues / i:", np.round(np.sort(np.linalg.eigvals(a).imag), 6))

# one projector by hand: circle of radius 1 around 2i, 64 trapezoid nodes
p = riesz_projector(a, CirclePath(2j, 1.0, 64))
print(f"trace {p.trace.real:.12f}  idempotence defect {p.idempotence_defect:.2e}")
print(f"||P|| = {op_norm(p.matrix):.3f} (1 for a normal matrix)")

# the local part (A - 2i) P is nilpotent; its index is the Jordan block size
print("nilpotency index:", local_part(a, p).nilpotency_index)

# all projectors at once, radius half the gap to the neighbours
projs = model_projectors(model)
total = sum(q.matrix for q in projs)
print(f"||sum P_k - I|| = {op_norm(total - np.eye(model.dim)):.2e}")
worst = max(op_norm(projs[i].matrix @ projs[j].matrix)
            for i in range(len(projs)) for j in range(len(projs)) if i != j)
print(f"max ||P_j P_k|| = {worst:.2e}")

# the trapezoid rule converges geometrically in the node count
exact = projs[0].matrix
for nodes in (8, 16, 32, 64):
    approx = riesz_projector(a, CirclePath(2j, 1.0, nodes), tol=np.inf).matrix
    print(f"{nodes:3d} nodes: error {op_norm(approx - exact):.2e}")
