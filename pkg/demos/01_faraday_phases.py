# %% [markdown]
# # Reflection phases of a driven atom-cavity system
#
# A photon reflected from a low-Q cavity picks up a phase that depends on
# whether the cavity holds a coupled atom. Tuning the probe half a linewidth
# below the cavity and setting the coupling to half the decay rate gives the
# phase pair (pi, pi/2) that every protocol in this package relies on.

# %%
import numpy as np

from faradayct.cavity import faraday_phases, reflection, reflection_empty, standard_tuning

params = standard_tuning()
print(params)
ph = faraday_phases(params)
print(f"phi  = {ph.phi:.15f}   (pi   = {np.pi:.15f})")
print(f"phi0 = {ph.phi0:.15f}   (pi/2 = {np.pi / 2:.15f})")

# %% [markdown]
# ## Sweeping the probe detuning
# With no atomic loss both reflections have unit modulus, so only the phases move.

# %%
for dw in np.linspace(-1.0, 1.0, 9):
    p = params.replace(omega_p=params.omega_c + dw * params.kappa)
    r, r0 = reflection(p), reflection_empty(p)
    print(f"detuning {dw:+.2f} kappa: arg r = {np.angle(r):+.4f}, arg r0 = {np.angle(r0):+.4f}, |r| = {abs(r):.6f}")

# %% [markdown]
# ## A small atomic decay makes the gate lossy
# The strict gate layer rejects such parameters; a run can opt into renormalizing instead.

# %%
lossy = faraday_phases(params.replace(gamma=0.01))
print(f"|r| = {lossy.mag:.6f}, lossless: {lossy.is_lossless}")
