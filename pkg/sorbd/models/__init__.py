"""
Models module
Spatial value types, kinematic trees, derivative bundles and pydantic schemas
"""

from .spatial import MotionVector, ForceVector, SpatialTransform, SpatialInertia
from .joint import JointKind, JointModel, JOINT_KINDS
from .model import Model, State, ROOT, DEFAULT_GRAVITY
from .bundles import KinematicsCache, DerivBundleFO, DerivBundleSO_ID, DerivBundleSO_FD
from .schemas import (
    InnerStrategy,
    OuterStrategy,
    StrategyConfig,
    StepConfig,
    ErrorReport,
    SlopeFit,
    BodyRecord,
    ModelFileDocument
)
from .errors import (
    ErrorCode,
    SorbdError,
    ShapeMismatchError,
    SpatialKindError,
    MalformedLieAlgebraError,
    InvalidRotationError,
    ModelValidationError,
    ModelFileError,
    NonPhysicalInertiaError,
    SingularInertiaError,
    FactorizationError,
    UnsupportedOperationError,
    ContractViolationError,
    UsageError,
    VerificationFailedError,
    ErrorDetail,
    ErrorResponse
)

__all__ = [
    # Spatial values
    'MotionVector',
    'ForceVector',
    'SpatialTransform',
    'SpatialInertia',

    # Trees
    'JointKind',
    'JointModel',
    'JOINT_KINDS',
    'Model',
    'State',
    'ROOT',
    'DEFAULT_GRAVITY',

    # Bundles
    'KinematicsCache',
    'DerivBundleFO',
    'DerivBundleSO_ID',
    'DerivBundleSO_FD',

    # Schemas
    'InnerStrategy',
    'OuterStrategy',
    'StrategyConfig',
    'StepConfig',
    'ErrorReport',
    'SlopeFit',
    'BodyRecord',
    'ModelFileDocument',

    # Errors
    'ErrorCode',
    'SorbdError',
    'ShapeMismatchError',
    'SpatialKindError',
    'MalformedLieAlgebraError',
    'InvalidRotationError',
    'ModelValidationError',
    'ModelFileError',
    'NonPhysicalInertiaError',
    'SingularInertiaError',
    'FactorizationError',
    'UnsupportedOperationError',
    'ContractViolationError',
    'UsageError',
    'VerificationFailedError',
    'ErrorDetail',
    'ErrorResponse',
]
