import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from resilife.aging import (
    AgingClass,
    check_aging_class,
    check_log_concavity,
    check_tp2_rr2,
    minors_verdict,
)
from resilife.distributions import DomainError, Exponential, HyperExponential, Weibull
from resilife.mixing import Continuous
from resilife.mixture import ResidualMixture
from resilife.numerics import Grid

HYP = HyperExponential([0.25, 0.75], [1.0, 2.0])
W2 = Weibull(2.0, 1.0)


@pytest.mark.parametrize("cls", ["ILR", "IFR", "DMRL", "NBU", "NBUE"])
def test_weibull_shape_two_is_in_every_positive_class(cls):
    assert check_aging_class(W2, cls).holds
    opposite = {"ILR": "DLR", "IFR": "DFR", "DMRL": "IMRL", "NBU": "NWU", "NBUE": "NWUE"}[cls]
    v = check_aging_class(W2, opposite)
    assert not v.holds and v.witness is not None


@pytest.mark.parametrize("cls", ["DLR", "DFR", "IMRL", "NWU", "NWUE"])
def test_hyperexponential_is_in_every_negative_class(cls):
    assert check_aging_class(HYP, cls).holds


@pytest.mark.parametrize("cls", list(AgingClass))
def test_exponential_is_on_every_boundary(cls):
    assert check_aging_class(Exponential(1.7), cls).holds


def test_class_verdict_serialises():
    d = check_aging_class(HYP, AgingClass.IFR).to_dict()
    assert d["cls"] == "IFR" and d["status"] == "fails"


def test_unknown_class_is_rejected():
    with pytest.raises(ValueError):
        check_aging_class(W2, "XYZ")


def test_log_concavity_labels():
    g = Grid(0.01, 5.0, 50)
    assert check_log_concavity(lambda t: np.exp(-(t**2)), g) == "log-concave"
    assert check_log_concavity(lambda t: 1 / (1 + t), g) == "log-convex"
    assert check_log_concavity(lambda t: np.exp(-t), g) == "both"
    assert check_log_concavity(lambda t: 2 + np.sin(3 * t), g) == "neither"
    with pytest.raises(DomainError):
        check_log_concavity(lambda t: t - 1, g)


def test_tp2_and_rr2_kernels():
    g = Grid(0.0, 2.0, 9)
    assert check_tp2_rr2(lambda x, y: np.exp(x * y), g, g).tp2
    v = check_tp2_rr2(lambda x, y: np.exp(-x * y), g, g)
    assert v.label == "RR2" and v.rr2 and not v.tp2 and v.tp2_witness is not None
    assert check_tp2_rr2(lambda x, y: np.exp(x + y), g, g).label == "both"


def test_minors_reject_negative_kernel():
    with pytest.raises(DomainError):
        minors_verdict(-np.ones((3, 3)), [0, 1, 2], [0, 1, 2], 1e-9)


def test_mixture_of_dfr_stays_dfr():
    mx = ResidualMixture(HYP, Continuous(Exponential(1.0)))
    for cls in ("DLR", "DFR", "IMRL"):
        assert check_aging_class(mx, cls).holds


@given(st.floats(1.05, 4.0), st.floats(0.3, 3.0))
def test_weibull_shape_above_one_is_ifr_not_dfr(shape, scale):
    g = Weibull(shape, scale)
    assert check_aging_class(g, "IFR").holds
    assert check_aging_class(g, "ILR").holds
    assert not check_aging_class(g, "DFR").holds


@given(st.floats(0.2, 0.95), st.floats(0.3, 3.0))
def test_weibull_shape_below_one_is_dfr_and_imrl(shape, scale):
    w = Weibull(shape, scale)
    assert check_aging_class(w, "DFR").holds
    assert check_aging_class(w, "NWU").holds
