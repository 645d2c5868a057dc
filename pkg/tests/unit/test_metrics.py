"""
Unit tests for error metrics and log-log slope fits
"""

import numpy as np
import pytest

from sorbd.models.errors import ShapeMismatchError
from sorbd.utils.metrics import error_report, fit_loglog


@pytest.mark.unit
class TestErrorReport:
    """Test MAE / RMSAE / MRE / RMSRE"""

    def test_identical_tensors(self, rng):
        """Test A = A_ref gives all-zero metrics"""
        A = rng.standard_normal((3, 4, 4))
        report = error_report(A, A.copy())
        assert (report.mae, report.rmsae, report.mre, report.rmsre) == (0.0, 0.0, 0.0, 0.0)
        assert report.count == 48

    def test_constant_offset_on_small_reference(self, rng):
        """Test every metric equals c when |ref| <= 1 and A = ref + c"""
        ref = rng.uniform(-1.0, 1.0, (2, 6, 6))
        report = error_report(ref + 0.25, ref)
        for value in (report.mae, report.rmsae, report.mre, report.rmsre):
            assert value == pytest.approx(0.25, rel=1e-12)

    def test_relative_denominator(self):
        """Test relative errors divide by max(|ref|, 1)"""
        report = error_report(np.array([11.0, 0.5]), np.array([10.0, 0.0]))
        assert report.mae == pytest.approx(1.0)
        assert report.mre == pytest.approx(0.5)
        assert report.rmsre == pytest.approx(np.sqrt((0.01 + 0.25) / 2))

    def test_stacked_tensor(self, rng):
        """Test the stacked n x 3n x 3n layout is accepted and counted"""
        A = rng.standard_normal((2, 6, 6))
        assert error_report(A, A, stacked=True).count == 9 * 2 ** 3
        with pytest.raises(ShapeMismatchError):
            error_report(A[:, :, :5], A[:, :, :5], stacked=True)

    def test_sequence_of_blocks(self, rng):
        """Test blocks are pooled into one report"""
        blocks = [rng.standard_normal((2, 2, 2)), rng.standard_normal((2, 2, 2))]
        shifted = [blocks[0], blocks[1] + 1e-3]
        report = error_report(shifted, blocks)
        assert report.count == 16
        assert report.mae == pytest.approx(1e-3, rel=1e-9)
        assert report.rmsae == pytest.approx(1e-3 / np.sqrt(2), rel=1e-9)

    def test_shape_mismatch(self, rng):
        """Test mismatched shapes are rejected"""
        with pytest.raises(ShapeMismatchError):
            error_report(np.zeros((2, 3)), np.zeros((3, 2)))
        with pytest.raises(ShapeMismatchError):
            error_report(np.zeros(2), [np.zeros(2)])

    def test_empty(self):
        """Test zero-size tensors give a zero report"""
        report = error_report(np.zeros((0, 0, 0)), np.zeros((0, 0, 0)))
        assert report.count == 0 and report.rmsre == 0.0


@pytest.mark.unit
class TestSlopeFit:
    """Test the log-log least-squares fit"""

    def test_cubic(self):
        """Test t = 1e-9 N^3 gives slope 3"""
        N = np.array([10, 20, 40, 80, 160])
        fit = fit_loglog(N, 1e-9 * N.astype(float) ** 3)
        assert fit.A == pytest.approx(3.0, abs=1e-10)
        assert fit.B == pytest.approx(np.log(1e-9), abs=1e-8)
        assert fit.residual < 1e-10
        assert fit.points == 5

    def test_quadratic_intercept(self):
        """Test t = 5 N^2 gives slope 2 and intercept log 5"""
        N = np.array([2.0, 4.0, 8.0, 16.0])
        fit = fit_loglog(N, 5 * N ** 2)
        assert fit.A == pytest.approx(2.0, abs=1e-10)
        assert fit.B == pytest.approx(np.log(5.0), abs=1e-10)

    def test_too_few_points(self):
        """Test fewer than four sizes are rejected"""
        with pytest.raises(ValueError, match="at least 4"):
            fit_loglog([1, 2, 3], [1.0, 2.0, 3.0])

    def test_non_positive_values(self):
        """Test zero or negative timings are rejected"""
        with pytest.raises(ValueError):
            fit_loglog([1, 2, 3, 4], [1.0, 0.0, 3.0, 4.0])
