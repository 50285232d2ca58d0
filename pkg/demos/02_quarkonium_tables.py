"""
Heavy quarkonium S-wave masses
==============================

Two measured splittings pin the two potential parameters at each lam.
The remaining states, up to 9S, are then predictions.

"""

from edp import quarkonia

for system in ("ccbar", "bbbar"):
    lams = (0.0, -0.2, -0.4) if system == "ccbar" else (0.0, -0.3, -0.6)
    rows = quarkonia.mass_table(system, list(lams))
    print(f"\n{system}")
    print(f"{'state':>10} " + " ".join(f"lam={lam:>5}" for lam in lams) + "   measured")
    by_state: dict[str, dict[float, float]] = {}
    measured: dict[str, float | None] = {}
    for row in rows:
        if row.ok:
            by_state.setdefault(row.state, {})[row.lam] = row.mass
            measured[row.state] = row.experimental
    for state, masses in by_state.items():
        cells = " ".join(f"{masses.get(lam, float('nan')):9.3f}" for lam in lams)
        exp = measured.get(state)
        print(f"{state:>10} {cells}   {'' if exp is None else f'{exp:.3f}'}")

# %%
# With lam < 0 the tower is capped at the constituent masses plus -1/lam.

fitted = quarkonia.fit("ccbar", -0.4)
print(f"\nccbar lam=-0.4: k2={fitted.k2:.4f} p2={fitted.p2:.4f} "
      f"ceiling={fitted.params.saturation_mass:.3f} GeV")
for n in (0, 10, 100, 10_000):
    print(f"  n={n:>6}: M = {quarkonia.mass(n, fitted.params):.4f} GeV")
