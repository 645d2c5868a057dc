"""
Services module
Dynamics algorithms, their derivatives, oracles and the benchmark harness
"""

# Service instances (fd_so_service, benchmark_service) should be imported directly where needed
from .dynamics import rnea, aba, crba, compute_kinematics_cache, minv_apply
from .first_order import idsva_fo, fd_fo, idfoza, idfoza_columns
from .second_order_id import idsva_so, d2tau_cross_qdd, stack_id_so
from .second_order_fd import fdsva_so
from .generators import make_serial_chain, make_binary_tree
from .model_loader import load_model, loads_model, dump_model

__all__ = [
    'rnea',
    'aba',
    'crba',
    'compute_kinematics_cache',
    'minv_apply',
    'idsva_fo',
    'fd_fo',
    'idfoza',
    'idfoza_columns',
    'idsva_so',
    'd2tau_cross_qdd',
    'stack_id_so',
    'fdsva_so',
    'make_serial_chain',
    'make_binary_tree',
    'load_model',
    'loads_model',
    'dump_model'
]
