"""
sorbd: first- and second-order analytical derivatives of rigid-body
inverse and forward dynamics for open kinematic trees
"""

__version__ = "0.1.0"
