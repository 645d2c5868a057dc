"""
Model Loader
Reads and writes the structured-text model format.

Format (one record per line, '#' starts a comment):

    sorbd-model v1
    gravity 0 0 0 0 0 -9.81
    body name=trunk parent=root joint=floating mass=10 inertia=0.1,0.2,0.2,0,0,0
    body name=hip parent=trunk joint=revolute-x xyz=0.2,0.1,0 rpy=0,0,0 mass=1 com=0,0,-0.1 inertia=...

Keys of a body line: name, parent (a body name or 'root'), joint, xyz
(placement translation), rpy (fixed-axis x-y-z angles) or quat (w,x,y,z),
mass, com and inertia (ixx,iyy,izz,ixy,ixz,iyz about the centre of mass).
Bodies may be listed in any order; they are numbered parents-first.
"""

import heapq
import logging
from pathlib import Path
from typing import Dict, List, TextIO, Union

import numpy as np
from pydantic import ValidationError
from scipy.spatial.transform import Rotation

from ..models.errors import ModelFileError, NonPhysicalInertiaError
from ..models.joint import JOINT_KINDS
from ..models.model import ROOT, Model
from ..models.schemas import BodyRecord, ModelFileDocument
from ..models.spatial import SpatialInertia, SpatialTransform

logger = logging.getLogger(__name__)

HEADER = "sorbd-model v1"
ROOT_NAME = "root"

_VECTOR_KEYS = {'xyz': 3, 'rpy': 3, 'quat': 4, 'com': 3, 'inertia': 6}


def _parse_body(tokens: List[str], line: int) -> BodyRecord:
    fields: Dict[str, object] = {}
    for token in tokens:
        key, sep, value = token.partition('=')
        if not sep or not value:
            raise ModelFileError(f"expected key=value, got {token!r}", line)
        if key in fields:
            raise ModelFileError(f"duplicate key {key!r}", line)
        if key in _VECTOR_KEYS:
            try:
                numbers = tuple(float(x) for x in value.split(','))
            except ValueError:
                raise ModelFileError(f"{key} must be comma-separated numbers, got {value!r}", line)
            if len(numbers) != _VECTOR_KEYS[key]:
                raise ModelFileError(f"{key} needs {_VECTOR_KEYS[key]} values, got {len(numbers)}", line)
            fields[key] = numbers
        else:
            fields[key] = value
    if fields.get('joint') is not None and fields['joint'] not in JOINT_KINDS:
        raise ModelFileError(f"unknown joint kind {fields['joint']!r}", line)
    try:
        return BodyRecord(line=line, **fields)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ModelFileError(f"invalid body record: {problems}", line)


def parse_document(text: str) -> ModelFileDocument:
    """Parse model-file text into validated records"""
    lines = text.splitlines()
    content = [(no, raw.split('#', 1)[0].strip()) for no, raw in enumerate(lines, start=1)]
    content = [(no, line) for no, line in content if line]
    if not content or content[0][1] != HEADER:
        raise ModelFileError(f"missing header line '{HEADER}'", content[0][0] if content else 1)

    gravity = None
    bodies = []
    for no, line in content[1:]:
        keyword, *tokens = line.split()
        if keyword == 'gravity':
            if gravity is not None:
                raise ModelFileError("duplicate gravity line", no)
            try:
                gravity = tuple(float(x) for x in tokens)
            except ValueError:
                raise ModelFileError("gravity must be six numbers", no)
            if len(gravity) != 6:
                raise ModelFileError(f"gravity needs 6 values, got {len(gravity)}", no)
        elif keyword == 'body':
            bodies.append(_parse_body(tokens, no))
        else:
            raise ModelFileError(f"unknown record type {keyword!r}", no)

    if not bodies:
        raise ModelFileError("model file contains no bodies", content[-1][0])
    document = ModelFileDocument(bodies=bodies)
    if gravity is not None:
        document.gravity = gravity
    return document


def _topological_order(bodies: List[BodyRecord]) -> List[int]:
    """
    Record indices ordered parents-first, lowest record index first among
    ready bodies, so files already in parent-before-child order keep their
    numbering. Raises on unknown parents and cycles.
    """
    index = {}
    for k, body in enumerate(bodies):
        if body.name == ROOT_NAME:
            raise ModelFileError(f"'{ROOT_NAME}' is reserved and cannot name a body", body.line)
        if body.name in index:
            raise ModelFileError(f"duplicate body name {body.name!r}", body.line)
        index[body.name] = k
    children: Dict[str, List[int]] = {}
    for k, body in enumerate(bodies):
        if body.parent != ROOT_NAME and body.parent not in index:
            raise ModelFileError(f"unknown parent {body.parent!r} of body {body.name!r}", body.line)
        children.setdefault(body.parent, []).append(k)

    order = []
    ready = list(children.get(ROOT_NAME, []))
    heapq.heapify(ready)
    while ready:
        k = heapq.heappop(ready)
        order.append(k)
        for child in children.get(bodies[k].name, []):
            heapq.heappush(ready, child)
    if len(order) != len(bodies):
        stranded = next(b for k, b in enumerate(bodies) if k not in set(order))
        raise ModelFileError(f"cycle detected in parent graph at body {stranded.name!r}", stranded.line)
    return order


def _placement(body: BodyRecord) -> SpatialTransform:
    if body.quat is not None:
        w, x, y, z = body.quat
        R = Rotation.from_quat([x, y, z, w]).as_matrix()
    elif body.rpy is not None:
        R = Rotation.from_euler('xyz', body.rpy).as_matrix()
    else:
        R = np.eye(3)
    return SpatialTransform(R, np.array(body.xyz))


def _inertia(body: BodyRecord) -> SpatialInertia:
    ixx, iyy, izz, ixy, ixz, iyz = body.inertia
    Ic = np.array([[ixx, ixy, ixz], [ixy, iyy, iyz], [ixz, iyz, izz]])
    if np.min(np.linalg.eigvalsh(Ic)) <= 0:
        raise ModelFileError(f"rotational inertia of body {body.name!r} is not positive definite", body.line)
    try:
        return SpatialInertia.from_mass_com_inertia(body.mass, body.com, Ic)
    except NonPhysicalInertiaError as e:
        raise ModelFileError(f"body {body.name!r}: {e.message}", body.line)


def build_model(document: ModelFileDocument) -> Model:
    """Assemble a Model from parsed records"""
    bodies = document.bodies
    order = _topological_order(bodies)
    position = {bodies[k].name: i for i, k in enumerate(order)}
    parents, joints, inertias, placements, names = [], [], [], [], []
    for k in order:
        body = bodies[k]
        parents.append(ROOT if body.parent == ROOT_NAME else position[body.parent])
        joints.append(body.joint)
        inertias.append(_inertia(body))
        placements.append(_placement(body))
        names.append(body.name)
    return Model(tuple(parents), tuple(joints), tuple(inertias), tuple(placements),
                 gravity=np.array(document.gravity), names=tuple(names))


def loads_model(text: str) -> Model:
    """
    Parse a model from an in-memory buffer.

    Raises:
        ModelFileError: On syntax errors, unknown joint kinds, parent cycles
            or non-physical inertias; carries the 1-based line number
    """
    model = build_model(parse_document(text))
    logger.debug(f"Loaded model with N={model.N}, n={model.n}")
    return model


def load_model(source: Union[str, Path, TextIO]) -> Model:
    """Load a model from a filesystem path or an open text stream"""
    if hasattr(source, 'read'):
        return loads_model(source.read())
    path = Path(source)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ModelFileError(f"cannot read model file {path}: {e}")
    return loads_model(text)


def _numbers(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def dump_model(model: Model) -> str:
    """
    Serialise a model to the sorbd-model v1 format.

    Orientations are written as quaternions and inertias about the centre
    of mass, so loads_model(dump_model(m)) reproduces m to rounding.
    """
    lines = [HEADER, f"gravity {' '.join(repr(float(g)) for g in model.gravity)}"]
    for i in range(model.N):
        inertia = model.inertias[i]
        c = inertia.com
        Ic = inertia.rotational_inertia - inertia.mass * (np.dot(c, c) * np.eye(3) - np.outer(c, c))
        placement = model.placements[i]
        x, y, z, w = Rotation.from_matrix(placement.rotation).as_quat()
        parent = ROOT_NAME if model.parents[i] == ROOT else model.names[model.parents[i]]
        lines.append(
            f"body name={model.names[i]} parent={parent} joint={model.joints[i].kind.value} "
            f"xyz={_numbers(placement.translation)} quat={_numbers((w, x, y, z))} "
            f"mass={float(inertia.mass)!r} com={_numbers(c)} "
            f"inertia={_numbers((Ic[0, 0], Ic[1, 1], Ic[2, 2], Ic[0, 1], Ic[0, 2], Ic[1, 2]))}"
        )
    return "\n".join(lines) + "\n"
