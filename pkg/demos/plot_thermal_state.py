"""
Thermal state of a quadrupolar spin in a field
==============================================

A spin-3/2 nucleus sits in an electric-field gradient with a magnetic field
tilted away from the gradient's principal axis. Its four levels are read as
two qubits and the equilibrium state is checked for entanglement.
"""
import numpy as np

from nqr_entanglement.entanglement import measure_all
from nqr_entanglement.model import ModelParams, Orientation, thermal_state
from nqr_entanglement.spin_algebra import SPIN_3_2

# alpha and beta are the Zeeman and quadrupole energies in units of kT
params = ModelParams(alpha=2.0, beta=6.0, eta=0.14, orientation=Orientation(0.94, 0.0))
rho = thermal_state(SPIN_3_2, params)
np.set_printoptions(precision=4, suppress=True)
print(rho.real)

report = measure_all(rho)
print(f"concurrence            {report.concurrence:.6f}")
print(f"entanglement of form.  {report.eof:.6f}")
print(f"entropy of qubit A     {report.entropy_a:.6f}")
print(f"entropy of qubit B     {report.entropy_b:.6f}")

# Without a field the state is separable whatever the gradient looks like.
zero_field = thermal_state(SPIN_3_2, ModelParams(0.0, 8.0, 0.92, Orientation(1.0, 0.3)))
print("zero-field concurrence", measure_all(zero_field).concurrence)
