"""
Cooling at a fixed field-to-gradient ratio
==========================================

Holding alpha/beta fixed and raising beta is the same as lowering the
temperature. The concurrence switches on at a finite beta and saturates.
"""
from nqr_entanglement.model import Orientation
from nqr_entanglement.scan import critical_beta, temperature_scan

o = Orientation(0.94, 0.0)
for ratio in (0.5, 1.0, 2.0):
    res = temperature_scan(ratio, 0.14, o, (0.01, 100, 21))
    cp = critical_beta(ratio, 0.14, o)
    print(f"alpha/beta={ratio:g}: onset at beta*={cp.beta_star:.4f}")
    for rec in res.records()[::4]:
        print(f"   T'={rec['T']:9.4f}  C={rec['concurrence']:.5f}")
