"""
Saturating energy levels
========================

A level whose energy feeds back on itself through E = (1 + lam E)^(q/2) E0
stays close to E0 while lam E0 is small, and piles up under -1/lam once the
base ladder climbs past that scale.

"""

import numpy as np

from edp import BaseSpectrum, SaturationModel, spectrum_table

# an oscillator ladder, hbar*omega = 1
spec = BaseSpectrum("harmonic_oscillator")

for q in (1, 2, 4):
    print(f"q = {q}")
    for lam in (0.0, -0.2, -1.0):
        levels = spectrum_table(spec, SaturationModel(lam, q), n_max=6)
        energies = np.array([lvl.energy for lvl in levels])
        print(f"  lam = {lam:5.1f}  E_n =", np.array2string(energies, precision=4))

# %%
# The gap to the ceiling closes at a rate set by q.  For q = 1 it falls
# like 1/n^2, for q = 4 only like 1/sqrt(n).

lam = -0.5
for q in (1, 2, 4):
    model = SaturationModel(lam, q)
    gaps = [(-1 / lam - spectrum_table(spec, model, n)[-1].energy) for n in (10, 100, 1000)]
    print(f"q = {q}: gap at n = 10, 100, 1000 ->", ", ".join(f"{g:.3e}" for g in gaps))

# %%
# Coulomb levels already sit below zero, so the same feedback drags them
# toward zero rather than toward a positive ceiling.

hydrogen = BaseSpectrum("hydrogen")
for lvl in spectrum_table(hydrogen, SaturationModel(-0.5, 2), n_max=5):
    print(f"n = {lvl.n}: E0 = {lvl.base_energy:+.5f}  E = {lvl.energy:+.5f}")
