# %% [markdown]
# Sorting kernels by what their fronts look like
#
# The classifier reads the high-frequency growth of the attenuation. Bounded
# growth means a jump survives. Sublinear growth gives a smooth front. Growth at
# the Paley-Wiener borderline (linear up to logs) spreads the front in steps.

# %%
import math

from viscowave import (Medium, cole_cole_kernel, constant_q_kernel, measure_kernel,
                       newtonian_kernel, prony_kernel, quasilinear_measure)
from viscowave.asymptotics import classify_wavefront, paley_wiener_test

unit = Medium(1.0, 1.0)
models = {
    "prony": prony_kernel([(2.0, 1.0), (1.0, 3.0)]),
    "cole_cole": cole_cole_kernel(1.0, 0.5, 1.0, 0.5),
    "constant_q": constant_q_kernel(0.5, 1.0, 0.5),
    "newtonian": newtonian_kernel(1.0),
    "r^-2 density": measure_kernel(quasilinear_measure(1.0, -2.0, 0.0, math.e)),
}

# %%
for name, k in models.items():
    rep = classify_wavefront(unit, k)
    print(f"{name:13s} {rep.wavefront_class:24s} C0={rep.C0}")

# %% [markdown]
# The stepwise case also carries a schedule of times at which successive
# derivatives of the front become continuous.

# %%
rep = classify_wavefront(unit, models["r^-2 density"])
print(rep.stepwise_schedule)

# %% [markdown]
# The Paley-Wiener integral separates the two power laws on either side of one.

# %%
for s in (0.5, 1.5):
    print(s, paley_wiener_test(lambda w, s=s: w ** s).finite)
