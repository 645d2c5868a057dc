"""
Numeric utilities package
"""

from .bicomplex import BiComplex, component, is_bicomplex
from .metrics import error_report, fit_loglog
from .timing import TimingStats, time_call

__all__ = [
    'BiComplex', 'component', 'is_bicomplex',
    'error_report', 'fit_loglog',
    'TimingStats', 'time_call'
]
