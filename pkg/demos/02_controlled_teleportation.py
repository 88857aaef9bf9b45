# %% [markdown]
# # Controlled teleportation of a single-qubit state
#
# Atom A carries the payload alpha|0> + beta|1>. One flying photon visits the
# cavities of A, the receiver's atom B and the controller's atom C in turn,
# then passes a wave plate. Measuring the photon, C (after a Hadamard) and B
# leaves the payload on the receiver side up to a Pauli fix chosen from the
# announced outcomes; the receiver can only apply it once the controller speaks.

# %%
import numpy as np

from faradayct.protocol import build, run

payload = (0.6, 0.8j)
spec = build("ct-superposition", 1, payload)
for stage in spec.stages:
    print(type(stage).__name__, {k: v for k, v in vars(stage).items() if k != "phases"})

# %% [markdown]
# ## Every measurement branch
# Each of the eight outcomes is equally likely and a single Pauli restores the payload.

# %%
final, records = run(spec)
for r in records:
    print(r.outcome, f"p = {r.probability:.4f}", f"fix = {r.correction}", f"F = {r.corrected_payload_fidelity:.12f}")

# %% [markdown]
# ## More controllers
# The wave plate alternates with the parity of the number of controllers.
# Choosing the wrong one leaves branches that no Pauli can repair.

# %%
from faradayct.optics import WavePlateKind

for n in (1, 2, 3, 4):
    recs = run(build("ct-superposition", n, payload))[1]
    print(f"{n} controller(s): {len(recs)} branches, plate {WavePlateKind.for_controls(n).value}, "
          f"min fidelity {min(r.corrected_payload_fidelity for r in recs):.12f}")

wrong = build("ct-superposition", 2, payload, wave_plate=WavePlateKind.for_controls(2).swapped())
recs = run(wrong, check_parity=False, require_correction=False)[1]
print("swapped plate, worst fidelity:", round(min(r.corrected_payload_fidelity for r in recs), 4))
