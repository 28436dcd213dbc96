# %% [markdown]
# Prony kernels: bounded attenuation and a sharp front
#
# A finite sum of decaying exponentials gives a finite K(0+), so the wave
# speed at the front is finite and the attenuation levels off at high frequency.

# %%
import numpy as np

from viscowave import Medium, curve, prony_kernel, prony_saturation, wavefront_speed

unit = Medium(1.0, 1.0)
k = prony_kernel([(2.0, 1.0), (1.0, 3.0)])   # (weight, rate) pairs

# %%
print("C0 =", wavefront_speed(unit, k))
print("saturated attenuation =", prony_saturation(unit, k))

# %% [markdown]
# The attenuation curve approaches that plateau from below.

# %%
w = np.logspace(-2, 4, 7)
cv = curve(unit, k, w)
for wi, ai, ci in zip(w, cv.A, cv.c):
    print(f"omega={wi:9.2e}  A={ai:.5f}  c={ci:.5f}")
