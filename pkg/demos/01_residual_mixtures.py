"""Residual life of a component whose age is random.

Run with ``python demos/01_residual_mixtures.py``.
"""

import numpy as np

from resilife import Continuous, Degenerate, Exponential, HyperExponential, ResidualMixture, Weibull

spacer = "_" * 60
xs = np.array([0.0, 0.5, 1.0, 2.0, 4.0])

print("\nA Weibull lifetime with sf exp(-t^2) wears out: its hazard 2t rises.")
base = Weibull(2.0, 1.0)
print("hazard at", xs, "=", base.hazard(xs))

print("\nIf the component has already run for an Exp(1) amount of time, the")
print("remaining life X* has sf E[sf(x + age) / sf(age)].  Here that is")
print("exp(-x^2) / (1 + 2x) in closed form.")
mx = ResidualMixture(base, Continuous(Exponential(1.0)))
print("computed  :", mx.sf(xs))
print("closed form:", np.exp(-xs**2) / (1 + 2 * xs))

print(spacer)
print("\nThe hazard of X* can be read two ways: f*/sf*, or the average baseline")
print("hazard at x + age among units still alive at x.  They must agree.")
print("ratio form      :", mx.hazard(xs))
print("conditional form:", mx.hazard_conditional(xs))

print("\nMean residual life, again by two routes:")
print("tail integral   :", mx.mrl(xs))
print("conditional form:", mx.mrl_conditional(xs))

print(spacer)
print("\nA used wear-out unit is worse than a new one: E(X*) <= E(X).")
print(f"E(X)  = {base.mean():.6f}")
print(f"E(X*) = {mx.mean():.6f}")

print("\nA hyperexponential lifetime (hazard falls) behaves the other way round.")
hyp = HyperExponential([0.25, 0.75], [1.0, 2.0])
for age in (0.5, 1.0, 2.0):
    m = ResidualMixture(hyp, Degenerate(age))
    print(f"fixed age {age:>3}: E(X*) = {m.mean():.6f}  vs  E(X) = {hyp.mean():.6f}")

print(spacer)
print("\nFor an exponential lifetime the age is irrelevant (memorylessness).")
flat = ResidualMixture(Exponential(1.5), Continuous(Weibull(2.0, 1.0)))
print("sf*    :", flat.sf(xs))
print("exp sf :", np.exp(-1.5 * xs))
