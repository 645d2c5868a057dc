"""
Integration tests for the sorbd command line
"""

import pandas as pd
import pytest

from sorbd.cli import main
from sorbd.models.schemas import ErrorReport
from sorbd.services.benchmark import CSV_SCHEMA
from sorbd.services.model_loader import load_model

FAST = ("--samples", "3", "--warmups", "0")


@pytest.mark.integration
class TestGenModel:
    """Test gen-model"""

    def test_stdout(self, run_cli):
        """Test a chain is written as a model document"""
        result = run_cli("gen-model", "--model", "chain:3", "--kinds", "revolute-x,spherical")
        assert result.code == 0
        assert result.out.startswith("sorbd-model v1\n")
        assert result.out.count("\nbody ") == 3

    def test_file_round_trip(self, run_cli, tmp_path):
        """Test the written file loads back with the same shape"""
        path = tmp_path / "tree.sorbd"
        result = run_cli("gen-model", "--model", "bintree:5", "--floating-base", "--out", str(path))
        assert result.code == 0
        model = load_model(path)
        assert model.N == 5
        assert model.n == 10


@pytest.mark.integration
class TestBench:
    """Test bench"""

    def test_table(self, run_cli):
        """Test one row per algorithm and size with the schema tag"""
        result = run_cli("bench", "--model", "chain", "--algo", "rnea,idsva-so", "--sizes", "2,3", *FAST)
        assert result.code == 0
        frame = result.table()
        assert len(frame) == 4
        assert (frame['schema'] == CSV_SCHEMA).all()
        assert set(frame['algorithm']) == {'rnea', 'idsva-so'}
        assert (frame['median_s'] > 0).all()
        assert (frame['samples'] == 3).all()

    def test_baseline_speedup(self, run_cli):
        """Test the baseline algorithm has speedup 1"""
        result = run_cli("bench", "--model", "bintree", "--algo", "fdsva-so", "--baseline", "fd2-fd",
                         "--sizes", "2", *FAST)
        frame = result.table()
        assert set(frame['algorithm']) == {'fdsva-so', 'fd2-fd'}
        assert frame.loc[frame.algorithm == 'fd2-fd', 'speedup'].iloc[0] == pytest.approx(1.0)

    def test_breakdown_rows(self, run_cli):
        """Test per-stage rows for fdsva-so"""
        result = run_cli("bench", "--model", "chain", "--algo", "fdsva-so", "--sizes", "3", "--breakdown", *FAST)
        frame = result.table()
        assert set(frame['stage']) == {'total', 'id_so', 'inner', 'outer', 'overhead'}

    def test_slope_fit_file(self, run_cli, tmp_path):
        """Test --fit writes one slope row per algorithm"""
        fit = tmp_path / "fit.csv"
        result = run_cli("bench", "--model", "chain", "--algo", "rnea", "--sizes", "2,4,8,16",
                         "--fit", str(fit), *FAST)
        assert result.code == 0
        slopes = pd.read_csv(fit)
        assert slopes['algorithm'].tolist() == ['rnea']
        assert slopes['points'].iloc[0] == 4


@pytest.mark.integration
class TestVerify:
    """Test verify"""

    @pytest.mark.parametrize("algo", ['idsva-so', 'fdsva-so'])
    def test_passes_against_complex_step(self, algo, run_cli):
        """Test the analytical bundles pass the default thresholds"""
        result = run_cli("verify", "--algo", algo, "--model", "chain:3", "--count", "2")
        assert result.code == 0
        report = ErrorReport.model_validate_json(result.out.strip())
        assert report.rmsre < 1e-10

    def test_multi_dof_model(self, run_cli):
        """Test a spherical/prismatic tree"""
        result = run_cli("verify", "--algo", "idsva-so", "--model", "bintree:3",
                         "--kinds", "spherical,prismatic-x", "--threads", "2", "--count", "2")
        assert result.code == 0

    def test_failing_threshold(self, run_cli):
        """Test exit 1 when the error exceeds the threshold"""
        result = run_cli("verify", "--algo", "idsva-so", "--model", "chain:3", "--oracle", "fd2",
                         "--threshold", "1e-15")
        assert result.code == 1
        assert result.error()['error_code'] == 'VERIFICATION_FAILED'

    @pytest.mark.slow
    def test_model_file(self, run_cli, quadruped_path):
        """Test the quadruped fixture"""
        result = run_cli("verify", "--algo", "idsva-so", "--model", str(quadruped_path))
        assert result.code == 0


@pytest.mark.integration
class TestStudies:
    """Test accuracy, sweep-step and calibrate-crossover"""

    def test_accuracy(self, run_cli):
        """Test the analytical method is far more accurate than Finite-Diff-1"""
        result = run_cli("accuracy", "--model", "chain", "--sizes", "2", "--methods", "analytical,fd1")
        frame = result.table().set_index('method')
        assert frame.loc['analytical', 'rmsre'] < 1e-10
        assert frame.loc['fd1', 'rmsre'] > frame.loc['analytical', 'rmsre']

    def test_sweep_step(self, run_cli):
        """Test one row per step"""
        result = run_cli("sweep-step", "--method", "fd2", "--model", "chain:2", "--h", "1e-6,1e-4")
        frame = result.table()
        assert frame['h'].tolist() == pytest.approx([1e-6, 1e-4], rel=1e-12)

    def test_sweep_grid(self, run_cli):
        """Test the Finite-Diff-1 grid covers every (h, k) pair"""
        result = run_cli("sweep-step", "--method", "fd1", "--model", "chain:2", "--h", "1e-4..1e-3",
                         "--points", "2", "--grid")
        assert len(result.table()) == 4

    def test_calibrate_crossover(self, run_cli):
        """Test the timing table and the crossover line"""
        result = run_cli("calibrate-crossover", "--sizes", "2,3", "--samples", "2", "--warmups", "0")
        assert result.code == 0
        assert {'dtm_median_s', 'idfoza_median_s'} <= set(result.table().columns)
        assert "crossover:" in result.err


@pytest.mark.integration
class TestUsageErrors:
    """Test exit code 2 and the JSON error document"""

    def test_bad_model_spec(self, run_cli):
        """Test an unknown model is a usage error"""
        result = run_cli("verify", "--algo", "idsva-so", "--model", "ring:3")
        assert result.code == 2
        assert result.error()['error_code'] == 'MODEL_VALIDATION'

    def test_bad_sizes(self, run_cli):
        """Test non-positive sizes"""
        result = run_cli("bench", "--model", "chain", "--algo", "rnea", "--sizes", "0")
        assert result.code == 2
        assert result.error()['error_code'] == 'USAGE_ERROR'

    def test_unknown_algorithm(self, run_cli):
        """Test an unknown algorithm name"""
        result = run_cli("bench", "--model", "chain", "--algo", "magic", "--sizes", "2")
        assert result.code == 2

    def test_model_file_error_reports_line(self, run_cli, tmp_path):
        """Test a broken model file reports its line"""
        path = tmp_path / "bad.sorbd"
        path.write_text("sorbd-model v1\nbody name=a parent=root joint=helical mass=1 inertia=1,1,1,0,0,0\n")
        result = run_cli("verify", "--algo", "idsva-so", "--model", str(path))
        assert result.code == 2
        error = result.error()
        assert error['error_code'] == 'MODEL_FILE'
        assert error['details'][0] == {'field': 'line', 'message': '2', 'type': 'parse_error'}

    def test_argument_errors_exit_2(self):
        """Test argparse rejects missing required options"""
        with pytest.raises(SystemExit) as exc_info:
            main(["bench", "--model", "chain"])
        assert exc_info.value.code == 2
