"""Checking stochastic orders and aging classes on a grid.

Each check returns a verdict with a witness point when it fails.
"""

from resilife import (
    Continuous,
    DiscreteAtoms,
    Exponential,
    HyperExponential,
    JointAgeModel,
    ResidualMixture,
    Weibull,
    check_aging_class,
    check_order,
    check_plrd_nlrd,
    check_si_sd,
)

spacer = "_" * 60
w2 = Weibull(2.0, 1.0)
hyp = HyperExponential([0.25, 0.75], [1.0, 2.0])
age = Continuous(Exponential(1.0))

print("\nAging classes of the two baselines:")
for name, dist in (("Weibull(2,1)", w2), ("hyperexponential", hyp)):
    row = {cls: check_aging_class(dist, cls).status for cls in ("IFR", "DFR", "ILR", "DLR", "DMRL", "IMRL")}
    print(f"  {name:<17}", row)

print(spacer)
print("\nWear-out baseline: the used unit is smaller in likelihood ratio.")
v = check_order(ResidualMixture(w2, age), w2, "LR")
print("  X* <= X in LR:", v.status, " largest violation", v.max_violation)
v = check_order(w2, ResidualMixture(w2, age), "ST")
print("  X <= X* in ST:", v.status, " witness", v.witness)

print("\nDecreasing hazard: the used unit is larger, and X* stays DFR.")
mx = ResidualMixture(hyp, age)
print("  X <= X* in HR:", check_order(hyp, mx, "HR").status)
print("  X* is DFR     :", check_aging_class(mx, "DFR").status)

print(spacer)
print("\nThe remaining life and the age are dependent unless the baseline is exponential.")
for name, base in (("hyperexponential", hyp), ("Weibull(2,1)", w2), ("Exp(1)", Exponential(1.0))):
    jm = JointAgeModel(ResidualMixture(base, age))
    print(f"  {name:<17} density: {check_plrd_nlrd(jm).label:<5} survival in age: {check_si_sd(jm).label}")

print(spacer)
print("\nA two-atom age for the Weibull baseline: the AI comparison X vs X*.")
two = ResidualMixture(w2, DiscreteAtoms([0.0, 1.0], [0.25, 0.75]))
v = check_order(w2, two, "AI")
print("  X <= X* in AI:", v.status, " (ratio of cumulative hazards is increasing on the grid)")
