"""
Concurrence against field strength
==================================

At fixed temperature the concurrence first grows with the field, peaks and
then falls off again as the Zeeman levels take over.
"""
import numpy as np

from nqr_entanglement.model import ModelParams, Orientation
from nqr_entanglement.scan import Axis, SweepSpec, sweep

for beta in (2, 6, 8, 12):
    spec = SweepSpec(Axis("alpha", 0, 10 * beta, 201),
                     fixed=ModelParams(0.0, beta, 0.14, Orientation(0.94, 0.0)))
    res = sweep(spec)
    alpha, c = res.column("alpha"), res.column("concurrence")
    k = int(np.argmax(c))
    print(f"beta={beta:>2}  peak C={c[k]:.4f} at alpha={alpha[k]:.1f}  C(alpha={alpha[-1]:g})={c[-1]:.4f}")
