"""
Oscillator eigenfunctions under saturation
==========================================

The radial functions keep their confluent hypergeometric shape; only the
width changes with the self-consistent frequency factor f = (1 + lam E).

"""

import numpy as np

from edp import SaturationModel
from edp.xform import ho_eigenfunction, oscillator_energy

r = np.linspace(0.0, 5.0, 11)
for lam in (0.0, -0.3):
    model = SaturationModel(lam, 2)
    print(f"lam = {lam}: E(n=2) = {oscillator_energy(2, model, 1.0):.5f}")
    phi = ho_eigenfunction(2, 0, model, 1.0, r)
    print("  phi(r) =", np.array2string(phi, precision=4, suppress_small=True))

# %%
# A second-order central difference applied to phi should reproduce the
# radial equation with an error shrinking like h^2.

model = SaturationModel(-0.3, 2)
e = oscillator_energy(2, model, 1.0)
f = model.f(e)
for h in (1e-2, 5e-3, 2.5e-3):
    x = np.arange(0.2, 4.0, h)
    p = ho_eigenfunction(2, 0, model, 1.0, np.concatenate(([x[0] - h], x, [x[-1] + h])))
    d2 = (p[2:] - 2 * p[1:-1] + p[:-2]) / h**2
    print(f"h = {h:.4f}: max residual = {np.max(np.abs(d2 + 2 * (e - f * x**2 / 2) * p[1:-1])):.3e}")
