"""Comparison functions: evaluation, iterates and certified tail bounds."""

import math

import numpy as np
import pytest

from ifscert import (
    ClosedFormTail,
    GeometricEnvelope,
    custom,
    eval_phi,
    iterate,
    linear,
    power_affine,
    spot_verify,
    tail_upper_bound,
)
from ifscert.errors import (
    CertificateViolationError,
    DomainError,
    TailNotCertifiableError,
)


class TestEval:
    def test_linear_third_at_one(self):
        assert eval_phi(linear(1 / 3), 1.0) == 1 / 3

    def test_zero_maps_to_zero(self):
        for phi in (linear(0.7), power_affine(0.5, 2.0, 1.0), custom("r/(1+r)")):
            assert eval_phi(phi, 0.0) == 0.0

    def test_custom_expression(self):
        assert eval_phi(custom("r/(1+r)"), 1.0) == 0.5

    def test_rejects_negative_radius(self):
        with pytest.raises(DomainError):
            eval_phi(linear(0.5), -1.0)

    def test_rejects_non_finite_radius(self):
        with pytest.raises(DomainError):
            eval_phi(linear(0.5), math.inf)

    def test_nonzero_at_zero_rejected_at_construction(self):
        with pytest.raises(DomainError):
            custom("r + 1")

    def test_linear_ratio_must_be_below_one(self):
        with pytest.raises(DomainError):
            linear(1.0)

    def test_vectorized(self):
        out = eval_phi(linear(0.5), np.array([0.0, 1.0, 2.0]))
        assert np.array_equal(out, [0.0, 0.5, 1.0])


class TestIterate:
    def test_zeroth_iterate_is_identity(self):
        assert iterate(linear(1 / 3), 1.0, 0) == 1.0

    def test_linear_geometric(self):
        phi = linear(1 / 3)
        value = iterate(phi, 1.0, 2)
        assert value == (1 / 3) * ((1 / 3) * 1.0)
        assert value == pytest.approx(1 / 9, rel=1e-15)

    def test_custom_hand_iteration(self):
        # 1 -> 1/2 -> 1/3 -> 1/4, checked against repeated single steps
        phi = custom("r/(1+r)")
        value = iterate(phi, 1.0, 3)
        assert value == eval_phi(phi, eval_phi(phi, eval_phi(phi, 1.0)))
        assert value == pytest.approx(0.25, rel=1e-14)

    def test_non_increasing_in_n(self):
        for phi in (linear(0.8), custom("r/(1+r)"), power_affine(0.6, 2.0, 1.0)):
            values = [iterate(phi, 3.0, n) for n in range(12)]
            for a, b in zip(values, values[1:]):
                assert b <= a
                if a > 0:
                    assert b < a


class TestTailUpperBound:
    def test_linear_closed_form(self):
        c, r, n = 0.4, 2.5, 3
        assert tail_upper_bound(linear(c), r, n) == c**n * r / (1 - c)

    def test_zero_radius(self):
        assert tail_upper_bound(linear(0.9), 0.0, 0) == 0.0

    def test_geometric_envelope_example(self):
        # envelope q=1/2, threshold 1, n0=0 at r=1, n=2 gives (1/2)^2/(1-1/2)
        phi = custom("r/2", tail=GeometricEnvelope(q=0.5, threshold=1.0, n0=0))
        assert tail_upper_bound(phi, 1.0, 2) == 0.5

    def test_envelope_dominates_partial_sums(self):
        # phi(r) = r/(2+r) satisfies phi(r) <= r/2 globally, so the envelope
        # is honest; compare against brute partial sums of 60 terms (the
        # remainder past term 60 is below q^60 * r).
        phi = custom("r/(2+r)", tail=GeometricEnvelope(q=0.5, threshold=None, n0=0))
        for n in (0, 1, 2, 5):
            bound = tail_upper_bound(phi, 1.0, n)
            partial = sum(iterate(phi, 1.0, k) for k in range(n, 60))
            assert partial <= bound <= partial + 0.5**60 * 2.0 + 1.2

    def test_partial_sums_never_exceed_bound_linear(self):
        phi = linear(0.55)
        r = 1.7
        for n in range(6):
            bound = tail_upper_bound(phi, r, n)
            acc = 0.0
            for m in range(n, n + 200):
                acc += iterate(phi, r, m)
                assert acc <= bound + 1e-12

    def test_decreasing_in_n(self):
        for phi in (
            linear(0.6),
            custom("r/2", tail=GeometricEnvelope(q=0.5, threshold=None, n0=0)),
            custom("r/2", tail=GeometricEnvelope(q=0.75, threshold=2.0, n0=3)),
        ):
            bounds = [tail_upper_bound(phi, 1.3, n) for n in range(12)]
            for a, b in zip(bounds, bounds[1:]):
                assert b <= a

    def test_exact_part_before_certificate_index(self):
        # with n0=3 the first terms are summed exactly
        phi = custom("r/2", tail=GeometricEnvelope(q=0.5, threshold=4.0, n0=3))
        r = 4.0
        bound = tail_upper_bound(phi, r, 0)
        expected = (4.0 + 2.0 + 1.0) + 0.5 / (1 - 0.5)
        assert bound == expected

    def test_no_certificate_is_an_error(self):
        with pytest.raises(TailNotCertifiableError):
            tail_upper_bound(custom("r/(1+r)"), 1.0, 0)

    def test_violated_envelope_is_reported(self):
        phi = custom("r/2", tail=GeometricEnvelope(q=0.5, threshold=0.1, n0=0))
        with pytest.raises(CertificateViolationError):
            tail_upper_bound(phi, 1.0, 0)

    def test_closed_form_certificate(self):
        phi = custom("r/2", tail=ClosedFormTail(fn=lambda n, r: 0.5**n * r * 2.0))
        assert tail_upper_bound(phi, 1.0, 3) == 0.25

    def test_power_affine_bound_sound(self):
        phi = power_affine(0.5, 2.0, 1.0)
        for n in (0, 1, 4):
            bound = tail_upper_bound(phi, 2.0, n)
            partial = sum(iterate(phi, 2.0, k) for k in range(n, 80))
            assert bound >= partial


class TestSpotVerify:
    def test_linear_clean(self):
        report = spot_verify(linear(1 / 3), [0.1, 1.0, 10.0])
        assert report.clean

    def test_identity_is_not_a_comparison_function(self):
        report = spot_verify(custom("r"), [1.0])
        assert not report.clean
        assert any(v.kind == "strict_decrease" for v in report.violations)

    def test_dense_grid_custom(self):
        grid = [k / 10 for k in range(0, 1001)]
        report = spot_verify(custom("r/(1+r)"), grid)
        assert report.clean

    def test_monotonicity_violation(self):
        # 0.9*r*(1-r) peaks at r=1/2, so it decreases between 0.3 and 0.8
        report = spot_verify(custom("0.9*r*(1-r)"), [0.3, 0.8])
        assert any(v.kind == "monotonicity" for v in report.violations)

    def test_empty_grid_is_usage_error(self):
        with pytest.raises(DomainError):
            spot_verify(linear(0.5), [])

    def test_unsorted_grid_rejected(self):
        with pytest.raises(DomainError):
            spot_verify(linear(0.5), [1.0, 0.5])

    def test_right_continuity_probe_runs(self):
        report = spot_verify(custom("r/(1+r)", right_continuous=True), [0.0, 0.5, 2.0])
        assert report.clean
        assert report.right_continuity_tolerance is not None
