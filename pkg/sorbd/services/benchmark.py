"""
Benchmark Service
Timing, verification, accuracy and step-size studies behind the CLI.

Every study draws its states from a seeded generator, so identical seeds
give identical inputs. State generation happens outside the timed region.
Results are pandas DataFrames whose first column is the CSV schema tag.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..config import settings
from ..models.errors import ModelValidationError
from ..models.model import Model, State
from ..models.schemas import ErrorReport, InnerStrategy, StepConfig, StrategyConfig
from ..utils.metrics import error_report, fit_loglog
from ..utils.timing import time_call
from . import oracles
from .dynamics import aba, crba, rnea
from .first_order import fd_fo, idsva_fo
from .generators import make_binary_tree, make_serial_chain
from .joints import random_state
from .model_loader import load_model
from .second_order_fd import ForwardDynamicsSOService, correction_term
from .second_order_id import idsva_so, stack_id_so

logger = logging.getLogger(__name__)

CSV_SCHEMA = "sorbd-csv v1"

MODEL_KINDS = ('chain', 'bintree')

ORACLE_METHODS = ('bicomplex', 'fd1', 'fd2')


def _idsva_so(model: Model, state: State):
    return idsva_so(model, state.q, state.qd, state.qdd)


def _fdsva_so(model: Model, state: State):
    return ForwardDynamicsSOService().compute(model, state.q, state.qd, state.tau)


# Timed algorithms: name -> callable(model, state)
ALGORITHMS: Dict[str, Callable] = {
    'rnea': lambda m, s: rnea(m, s.q, s.qd, s.qdd),
    'aba': lambda m, s: aba(m, s.q, s.qd, s.tau),
    'crba': lambda m, s: crba(m, s.q),
    'idsva-fo': lambda m, s: idsva_fo(m, s.q, s.qd, s.qdd),
    'fd-fo': lambda m, s: fd_fo(m, s.q, s.qd, s.tau),
    'idsva-so': _idsva_so,
    'fdsva-so': _fdsva_so,
    'fd1-id': lambda m, s: oracles.finite_diff1_bundle(m, s, 'rnea'),
    'fd2-id': lambda m, s: oracles.finite_diff2_so(m, s, 'rnea'),
    'fd1-fd': lambda m, s: oracles.finite_diff1_bundle(m, s, 'aba'),
    'fd2-fd': lambda m, s: oracles.finite_diff2_so(m, s, 'aba'),
}

# Verifiable algorithms: name -> (dynamics function, analytical bundle)
VERIFIABLE: Dict[str, Tuple[str, Callable]] = {
    'idsva-so': ('rnea', _idsva_so),
    'fdsva-so': ('aba', _fdsva_so),
}


def parse_model_spec(spec: str, kinds=None, floating_base: bool = False, seed: int = 0) -> Model:
    """
    Build a model from 'chain:N', 'bintree:N' or a model-file path.

    Raises:
        ModelValidationError: If a generator spec is malformed
    """
    kind, sep, size = spec.partition(':')
    if sep and kind in MODEL_KINDS:
        try:
            N = int(size)
        except ValueError:
            raise ModelValidationError(f"model size must be an integer, got {size!r}")
        return make_model(kind, N, kinds, floating_base, seed)
    if Path(spec).exists():
        return load_model(spec)
    raise ModelValidationError(
        f"Unknown model: {spec}. Use chain:N, bintree:N or the path of a model file")


def make_model(kind: str, N: int, kinds=None, floating_base: bool = False, seed: int = 0) -> Model:
    """Synthetic model of the given family"""
    if kind not in MODEL_KINDS:
        raise ModelValidationError(f"Unknown model family: {kind}. Available: {list(MODEL_KINDS)}")
    builder = make_serial_chain if kind == 'chain' else make_binary_tree
    options = {'floating_base': floating_base, 'seed': seed}
    if kinds:
        options['kinds'] = kinds
    return builder(N, **options)


def _report_row(report: ErrorReport) -> Dict[str, float]:
    return {'mae': report.mae, 'rmsae': report.rmsae, 'mre': report.mre, 'rmsre': report.rmsre,
            'count': report.count}


class BenchmarkService:
    """Runs the timing and accuracy studies"""

    def __init__(self, samples: Optional[int] = None, warmups: Optional[int] = None,
                 threads: Optional[int] = None):
        self.samples = samples or settings.bench_samples
        self.warmups = settings.bench_warmups if warmups is None else warmups
        self.threads = threads or settings.verify_threads

    # -- timing ------------------------------------------------------------------

    def bench(self, algorithms: Sequence[str], model_kind: str, sizes: Sequence[int], seed: int = 0,
              baseline: Optional[str] = None, breakdown: bool = False) -> pd.DataFrame:
        """
        Median and mean wall time per (algorithm, model, N).

        Args:
            baseline: Algorithm whose median time divides every other
                algorithm's at the same N (speedup column)
            breakdown: For fdsva-so, add rows for the ID SO pass, Inner-Term,
                Outer-Term and the remaining overhead
        """
        unknown = [a for a in list(algorithms) + ([baseline] if baseline else []) if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"Unknown algorithm: {unknown[0]}. Available: {list(ALGORITHMS)}")
        names = list(algorithms)
        if baseline and baseline not in names:
            names.append(baseline)

        rows = []
        for N in sizes:
            model = make_model(model_kind, N, seed=seed)
            for name in names:
                rng = np.random.default_rng(seed)
                stats = time_call(ALGORITHMS[name], self.samples, self.warmups,
                                  setup=lambda: (model, random_state(model, rng)))
                rows.append({'algorithm': name, 'stage': 'total', 'model': model_kind, 'N': N, 'n': model.n,
                             'samples': stats.count, 'median_s': stats.median, 'mean_s': stats.mean})
                logger.info(f"{name} {model_kind}:{N} median {stats.median:.3e} s")
                if breakdown and name == 'fdsva-so':
                    rows.extend(self._fdsva_breakdown(model, model_kind, N, seed, stats.median))

        frame = pd.DataFrame(rows)
        if baseline:
            base = frame[(frame.algorithm == baseline) & (frame.stage == 'total')].set_index('N')['median_s']
            frame['speedup'] = frame['N'].map(base) / frame['median_s']
        frame.insert(0, 'schema', CSV_SCHEMA)
        return frame

    def _fdsva_breakdown(self, model: Model, model_kind: str, N: int, seed: int, total: float) -> List[Dict]:
        service = ForwardDynamicsSOService()
        rng = np.random.default_rng(seed)
        stages: Dict[str, List[float]] = {'id_so': [], 'inner': [], 'outer': []}
        for _ in range(self.samples):
            state = random_state(model, rng)
            timings = service.compute(model, state.q, state.qd, state.tau).timings
            for stage in stages:
                stages[stage].append(timings[stage])
        medians = {stage: float(np.median(values)) for stage, values in stages.items()}
        medians['overhead'] = max(total - sum(medians.values()), 0.0)
        return [{'algorithm': 'fdsva-so', 'stage': stage, 'model': model_kind, 'N': N, 'n': model.n,
                 'samples': self.samples, 'median_s': value, 'mean_s': value}
                for stage, value in medians.items()]

    def fit_slopes(self, frame: pd.DataFrame) -> pd.DataFrame:
        """log-log slope of median time against N per algorithm (total rows only)"""
        rows = []
        for name, group in frame[frame.stage == 'total'].groupby('algorithm'):
            fit = fit_loglog(group['N'].tolist(), group['median_s'].tolist())
            rows.append({'schema': CSV_SCHEMA, 'algorithm': name, 'A': fit.A, 'B': fit.B,
                         'residual': fit.residual, 'points': fit.points})
        return pd.DataFrame(rows)

    # -- verification ------------------------------------------------------------

    def _reference(self, oracle: str, fn: str, model: Model, state: State, step: Optional[float]):
        if oracle == 'bicomplex':
            return oracles.bicomplex_bundle(model, state, fn, h=step)
        if oracle == 'fd1':
            return oracles.finite_diff1_bundle(model, state, fn, StepConfig(h=step or settings.fd1_step))
        return oracles.finite_diff2_so(model, state, fn, h=step)

    def verify(self, algorithm: str, oracle: str, model: Model, seed: int = 0, count: int = 1,
               step: Optional[float] = None) -> ErrorReport:
        """
        Error of an analytical second-order bundle against an oracle over
        `count` random states, evaluated on the configured worker threads.
        """
        if algorithm not in VERIFIABLE:
            raise ValueError(f"Unknown algorithm: {algorithm}. Available: {list(VERIFIABLE)}")
        if oracle not in ORACLE_METHODS:
            raise ValueError(f"Unknown oracle: {oracle}. Available: {list(ORACLE_METHODS)}")
        fn, analytical = VERIFIABLE[algorithm]
        rng = np.random.default_rng(seed)
        states = [random_state(model, rng) for _ in range(count)]

        def compare(state: State):
            computed = analytical(model, state)
            reference = self._reference(oracle, fn, model, state, step)
            return oracles.bundle_tensors(computed), oracles.bundle_tensors(reference)

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            pairs = list(pool.map(compare, states))
        computed = [t for pair in pairs for t in pair[0]]
        reference = [t for pair in pairs for t in pair[1]]
        report = error_report(computed, reference)
        logger.info(f"verify {algorithm} vs {oracle}: rmsre={report.rmsre:.3e} over {count} states")
        return report

    def accuracy(self, methods: Sequence[str], model_kind: str, sizes: Sequence[int],
                 seed: int = 0, fn: str = 'rnea') -> pd.DataFrame:
        """
        Error metrics of the analytical algorithm and the finite-difference
        methods against the bi-complex reference, per model size. The ID
        comparison uses the stacked n x 3n x 3n tensor.
        """
        rows = []
        for N in sizes:
            model = make_model(model_kind, N, seed=seed)
            state = random_state(model, np.random.default_rng(seed))
            reference = oracles.bicomplex_bundle(model, state, fn)
            for method in methods:
                if method == 'analytical':
                    bundle = _idsva_so(model, state) if fn == 'rnea' else _fdsva_so(model, state)
                elif method == 'fd1':
                    bundle = oracles.finite_diff1_bundle(model, state, fn)
                elif method == 'fd2':
                    bundle = oracles.finite_diff2_so(model, state, fn)
                else:
                    raise ValueError(f"Unknown method: {method}. Available: ['analytical', 'fd1', 'fd2']")
                if fn == 'rnea':
                    report = error_report(stack_id_so(bundle), stack_id_so(reference), stacked=True)
                else:
                    report = error_report(list(oracles.bundle_tensors(bundle)),
                                          list(oracles.bundle_tensors(reference)))
                rows.append({'schema': CSV_SCHEMA, 'method': method, 'function': fn, 'model': model_kind,
                             'N': N, 'n': model.n, **_report_row(report)})
        return pd.DataFrame(rows)

    # -- step tuning -------------------------------------------------------------

    def sweep_step(self, method: str, model: Model, steps: Sequence[float], seed: int = 0,
                   fn: str = 'rnea', grid: bool = False) -> pd.DataFrame:
        """
        Error of Finite-Diff-1 or Finite-Diff-2 against the bi-complex
        reference for each step size. With grid=True (Finite-Diff-1 only)
        h and k are swept independently over the same values.
        """
        if method not in ('fd1', 'fd2'):
            raise ValueError(f"Unknown method: {method}. Available: ['fd1', 'fd2']")
        state = random_state(model, np.random.default_rng(seed))
        reference = oracles.bundle_tensors(oracles.bicomplex_bundle(model, state, fn))
        if method == 'fd1':
            pairs = [(h, k) for h in steps for k in steps] if grid else [(h, h) for h in steps]
        else:
            pairs = [(h, None) for h in steps]

        rows = []
        for h, k in pairs:
            if method == 'fd1':
                bundle = oracles.finite_diff1_bundle(model, state, fn, StepConfig(h=h, k=k))
            else:
                bundle = oracles.finite_diff2_so(model, state, fn, h=h)
            report = error_report(list(oracles.bundle_tensors(bundle)), list(reference))
            rows.append({'schema': CSV_SCHEMA, 'method': method, 'h': h, 'k': k, **_report_row(report)})
        return pd.DataFrame(rows)

    # -- crossover -----------------------------------------------------------------

    def calibrate_crossover(self, model_kind: str, sizes: Sequence[int],
                            seed: int = 0) -> Tuple[Optional[int], pd.DataFrame]:
        """
        Time the Inner-Term correction with DTM and IDFOZA on the same
        inputs per size.

        Returns:
            (N*, table): the smallest size from which IDFOZA is faster at
            every larger measured size (None when it never is), and the
            timing table
        """
        rows = []
        for N in sizes:
            model = make_model(model_kind, N, seed=seed)
            state = random_state(model, np.random.default_rng(seed))
            fo = fd_fo(model, state.q, state.qd, state.tau)
            id_so = idsva_so(model, state.q, state.qd, fo.qdd)
            row = {'schema': CSV_SCHEMA, 'model': model_kind, 'N': N, 'n': model.n}
            for strategy in InnerStrategy:
                stats = time_call(
                    lambda: correction_term(id_so.dM_dq, fo.dfd_dq, strategy, model, state.q),
                    self.samples, self.warmups)
                row[f"{strategy.value}_median_s"] = stats.median
            rows.append(row)
            logger.info(f"crossover {model_kind}:{N} dtm={row['dtm_median_s']:.3e} "
                        f"idfoza={row['idfoza_median_s']:.3e}")

        frame = pd.DataFrame(rows)
        crossover = None
        faster = (frame['idfoza_median_s'] < frame['dtm_median_s']).tolist()
        for position in range(len(faster)):
            if all(faster[position:]):
                crossover = int(frame['N'].iloc[position])
                break
        if crossover is None:
            logger.warning(f"No inner-term crossover found for {model_kind} sizes {list(sizes)}")
        return crossover, frame

    def strategy_for(self, crossover: Optional[int]) -> StrategyConfig:
        """StrategyConfig with a calibrated inner crossover"""
        if crossover is None:
            return StrategyConfig(inner=InnerStrategy.DTM)
        return StrategyConfig(inner_crossover_n=crossover)


# Global service instance
benchmark_service = BenchmarkService()
