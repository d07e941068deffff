"""Curve-separation iteration: trivial cases, a real instance, and
robustness of the step discipline."""

import math

import numpy as np
import pytest

from wrightbound.billiard import (
    BilliardOutcome,
    BilliardProblem,
    identity_inverse,
    run,
)
from wrightbound.bounds import DEFAULT_A, BoundParams, L
from wrightbound.interval import Interval

pt = Interval.point


def _shift_q(t):
    return pt(t + 0.3)


def test_constant_gap_trivial():
    out = run(BilliardProblem(_shift_q, identity_inverse, 0.0, 1.0))
    assert out.separated
    assert out.steps == 5
    assert out.trajectory == pytest.approx([0.0, 0.3, 0.6, 0.9, 1.2])


def test_zero_gap_stalls():
    out = run(BilliardProblem(pt, identity_inverse, 0.0, 1.0))
    assert not out.separated
    assert out.failure_reason == "stalled"
    assert out.steps == 1


def test_invalid_interval_rejected():
    with pytest.raises(ValueError):
        BilliardProblem(_shift_q, identity_inverse, 1.0, 0.0)


def test_max_steps_budget():
    out = run(BilliardProblem(lambda t: pt(t + 1e-9), identity_inverse,
                              0.0, 1.0, max_steps=10))
    assert not out.separated
    assert out.failure_reason == "max_steps"


def test_domain_error_reported():
    # p_inverse = sqrt fails on the negative value q produces at the start.
    out = run(BilliardProblem(lambda t: pt(t + 0.2),
                              lambda y: y.sqrt(), -0.5, 1.0))
    assert not out.separated
    assert out.failure_reason == "domain_error"


def _lemma_a_problem(max_steps=10 ** 6):
    def q(t):
        return L(BoundParams(DEFAULT_A, pt(-t), pt(t)))

    return BilliardProblem(q, identity_inverse, -0.61, -0.009, max_steps)


def test_separation_instance_and_count_band():
    out = run(_lemma_a_problem())
    assert out.separated
    assert 50 <= out.steps <= 300
    assert out.trajectory[-1] > -0.009 > out.trajectory[-2]


def test_trajectory_strictly_increasing():
    out = run(_lemma_a_problem())
    assert all(b > a for a, b in zip(out.trajectory, out.trajectory[1:]))


def test_dense_sample_soundness_smoke():
    # Necessary condition after a separated run: q - p > 0 on a dense
    # float grid (the rigorous fact is the run itself).
    out = run(_lemma_a_problem())
    assert out.separated
    for t in np.linspace(-0.61, -0.009, 10_000):
        t = float(t)
        assert L(BoundParams(DEFAULT_A, pt(-t), pt(t))).lo > t


def test_extra_ulp_rounding_robustness():
    base = run(_lemma_a_problem())

    def q_shrunk(t):
        v = L(BoundParams(DEFAULT_A, pt(-t), pt(t)))
        return pt(math.nextafter(v.lo, -math.inf))

    out = run(BilliardProblem(q_shrunk, identity_inverse, -0.61, -0.009))
    assert out.separated
    assert out.steps <= 2 * base.steps


def test_outcome_serialization():
    out = run(BilliardProblem(_shift_q, identity_inverse, 0.0, 1.0))
    d = out.to_dict()
    assert d["separated"] is True
    assert d["steps"] == 5
    assert d["trajectory_first"] == pytest.approx([0.0, 0.3, 0.6])
    assert isinstance(out, BilliardOutcome)
