"""
From the onset of entanglement to kelvin
========================================

The onset beta is converted into a lattice temperature for the five-coordinated
Cu-63 site. Two conventions for the energy unit are in use, and they differ by
the factor 4I(2I-1) = 12, so both are shown.
"""
from nqr_entanglement.model import Orientation, UnitConvention, get_preset, temperature_for_beta
from nqr_entanglement.scan import critical_beta

cp = critical_beta(1.0, 0.14, Orientation(0.94, 0.0))
print(f"beta* = {cp.beta_star:.4f} (bracket {cp.bracket[0]:.4f}..{cp.bracket[1]:.4f})")

cu = get_preset("cu63-5coord")
for conv in UnitConvention:
    for beta in (cp.beta_star, 0.6):
        t = temperature_for_beta(cu, beta, conv)
        print(f"{conv.value:>8}: beta={beta:.4f} -> T = {t * 1e3:.4f} mK")
