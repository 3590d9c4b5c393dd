"""
Best field direction
====================

For each (alpha, beta) the field direction is tuned to maximise the
concurrence. The optimum tilt stays close to 0.94 rad from the gradient axis,
in the plane of the larger in-plane component.
"""
from nqr_entanglement.scan import max_over_angles_surface, maximize_over_angles, ridge_maximum

# a coarse angular grid keeps this quick; refine at the best cell afterwards
surface = max_over_angles_surface((0, 10, 11), (0, 12, 13), eta=0.14, grid_n=37, refine_iters=20)
cell = ridge_maximum(surface)
print(f"ridge maximum near alpha={cell['alpha']:g}, beta={cell['beta']:g}")

opt = maximize_over_angles(cell["alpha"], cell["beta"], 0.14)
print(f"theta*={opt.theta_star:.4f} rad  phi*={opt.phi_star:.4f} rad  C*={opt.c_star:.5f}")

for rec in surface.records():
    if rec["alpha"] == cell["alpha"]:
        print(f"  beta={rec['beta']:>4g}  C*={rec['concurrence']:.4f}  theta*={rec['theta_star']:.3f}")
