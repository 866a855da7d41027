"""
Lattice polytopes: vertices, primitive facet inequalities, the open face
decomposition with its normal cones, the Delzant test, lattice points of
dilates and exact volumes.

All combinatorics is exact. Facet normals are primitive integer vectors
``u_i`` with offsets ``a_i`` such that ``l_i(x) = <x, u_i> + a_i >= 0`` on P.
"""
import enum
import functools
import hashlib
import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy.spatial import ConvexHull, QhullError

from newton_ensemble.config import LATTICE_CAP_DEFAULT
from newton_ensemble.errors import (
    ConfigError,
    DimensionUnsupported,
    LatticeOverflow,
    NegativeCoordinate,
    NotFullDimensional,
    OutsidePolytope,
    PolytopeFileError,
)

__all__ = [
    'Facet',
    'Face',
    'LatticePolytope',
    'DelzantCertificate',
    'SimplexFacet',
    'BoundaryDecomposition',
    'from_vertices',
    'simplex',
    'faces',
    'is_delzant',
    'lattice_points',
    'volume',
    'face_containing',
    'boundary_decomposition',
]

log = logging.getLogger(__name__)

SUPPORTED_DIMENSIONS = (1, 2, 3)

IntVector = Tuple[int, ...]


def _primitive(vector: Sequence[int]) -> IntVector:
    divisor = functools.reduce(math.gcd, (abs(int(c)) for c in vector))
    if divisor == 0:
        return tuple(int(c) for c in vector)
    return tuple(int(c) // divisor for c in vector)


def _dot(x: Sequence, y: Sequence):
    return sum(a * b for a, b in zip(x, y))


def _affine_rank(points: Sequence[Sequence[int]]) -> int:
    if len(points) < 2:
        return 0
    base = points[0]
    return sympy.Matrix([[c - b for c, b in zip(point, base)] for point in points[1:]]).rank()


def _hyperplane_normal(points: Sequence[IntVector]) -> IntVector:
    """Integer normal of the hyperplane through m affinely independent points."""
    base = points[0]
    rows = [[c - b for c, b in zip(point, base)] for point in points[1:]]
    if len(base) == 2:
        dx, dy = rows[0]
        return _primitive((-dy, dx))
    (a1, a2, a3), (b1, b2, b3) = rows
    return _primitive((a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1))


@dataclass(frozen=True)
class Facet:
    normal: IntVector
    offset: int

    def slack(self, x: Sequence):
        """``l(x) = <x, u> + a``, exact for integer and rational input."""
        return _dot(x, self.normal) + self.offset


@dataclass(frozen=True)
class Face:
    """
    Open face of a lattice polytope.

    Faces are disjoint; the face with no active facets is the interior.
    ``generators`` are the negated normals of the active facets.
    """
    id: str
    dim: int
    active: Tuple[int, ...]
    vertices: Tuple[IntVector, ...]
    tangent_basis: Tuple[IntVector, ...]
    sample: Tuple[Fraction, ...]
    generators: Tuple[IntVector, ...]

    @property
    def is_interior(self) -> bool:
        return not self.active

    @property
    def label(self) -> str:
        if self.is_interior:
            return 'interior'
        if self.dim == 0:
            return 'vertex %s' % (self.vertices[0],)
        if self.dim == 1:
            return 'edge %s-%s' % (self.vertices[0], self.vertices[-1])
        return 'facet %s' % (self.vertices,)


@dataclass(frozen=True)
class DelzantCertificate:
    ok: bool
    vertex: Optional[IntVector] = None
    reason: str = ''

    def __bool__(self):
        return self.ok


class SimplexFacet(enum.Enum):
    """Facets of the dilated simplex pΣ in the plane, with the coordinate along each."""
    AXIS_1 = 'x1=0'
    AXIS_2 = 'x2=0'
    INFINITY = 'x1+x2=p'

    def contains(self, x: Sequence[int], p: int) -> bool:
        if self is SimplexFacet.AXIS_1:
            return x[0] == 0
        if self is SimplexFacet.AXIS_2:
            return x[1] == 0
        return x[0] + x[1] == p

    def coordinate(self, x: Sequence[int]) -> int:
        return x[0] if self is SimplexFacet.AXIS_2 else x[1]


@dataclass(frozen=True)
class BoundaryDecomposition:
    interior: Tuple[Face, ...]
    exterior: Tuple[Face, ...]
    segments: Dict[SimplexFacet, Optional[Tuple[int, int]]]
    length: int


@dataclass(frozen=True)
class LatticePolytope:
    """
    Full-dimensional lattice polytope in the nonnegative orthant.

    Use :func:`from_vertices` to build one; the constructor trusts its input.
    """
    vertices: Tuple[IntVector, ...]
    facets: Tuple[Facet, ...]
    p: int
    simplices: Tuple[Tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    @property
    def degree(self) -> int:
        return max(sum(vertex) for vertex in self.vertices)

    @functools.cached_property
    def normals(self) -> np.ndarray:
        return np.array([facet.normal for facet in self.facets], dtype=float)

    @functools.cached_property
    def offsets(self) -> np.ndarray:
        return np.array([facet.offset for facet in self.facets], dtype=float)

    def slacks(self, x: np.ndarray) -> np.ndarray:
        """Floating point facet slacks of one point or an (n, m) array of points."""
        return np.asarray(x, dtype=float) @ self.normals.T + self.offsets

    @functools.cached_property
    def faces(self) -> Tuple[Face, ...]:
        return _enumerate_faces(self)

    @functools.cached_property
    def _faces_by_active(self) -> Dict[FrozenSet[int], Face]:
        return {frozenset(face.active): face for face in self.faces}

    def face_by_id(self, face_id: str) -> Face:
        for face in self.faces:
            if face.id == face_id:
                return face
        raise KeyError(face_id)

    @property
    def interior(self) -> Face:
        return self._faces_by_active[frozenset()]

    # ==
    # IO
    # ==

    @staticmethod
    def from_json(path: str) -> 'LatticePolytope':
        """
        Reads a polytope file:

            ..code::

                {"vertices": [[0, 0], [1, 0], [0, 1], [1, 1]], "p": 2}

        ``p`` is optional and only needed for a non-minimal embedding.
        """
        try:
            with open(path, 'r') as fh:
                document = json.load(fh)
        except (OSError, ValueError) as exc:
            raise PolytopeFileError('cannot read polytope file %s: %s' % (path, exc), path=path)
        if not isinstance(document, dict) or 'vertices' not in document:
            raise PolytopeFileError('polytope file %s has no "vertices" list' % path, path=path)
        return from_vertices(document['vertices'], p=document.get('p'))

    def to_dict(self) -> dict:
        return dict(
            dim=self.dim,
            p=self.p,
            vertices=[list(vertex) for vertex in self.vertices],
            facets=[dict(normal=list(facet.normal), offset=facet.offset) for facet in self.facets])


# ============
# Construction
# ============

def _as_lattice_point(point) -> IntVector:
    coordinates = []
    for value in point:
        if isinstance(value, bool) or int(value) != value:
            raise ConfigError('vertex %r is not a lattice point' % (point,))
        coordinates.append(int(value))
    return tuple(coordinates)


def from_vertices(points: Iterable[Sequence[int]], p: Optional[int] = None) -> LatticePolytope:
    """
    Convex hull of a finite set of lattice points in the nonnegative orthant.

    :param points: integer vectors, all of the same length m in {1, 2, 3}
    :param p: optional simplex degree; defaults to the largest coordinate sum
    """
    try:
        lattice = sorted(set(_as_lattice_point(point) for point in points))
    except TypeError as exc:
        raise ConfigError('vertices must be lists of integers: %s' % exc)
    if not lattice:
        raise NotFullDimensional('empty vertex list')
    m = len(lattice[0])
    if any(len(point) != m for point in lattice):
        raise ConfigError('vertices have mixed dimensions')
    if m not in SUPPORTED_DIMENSIONS:
        raise DimensionUnsupported('dimension %d not supported (1, 2 or 3)' % m, dim=m)
    negative = [point for point in lattice if min(point) < 0]
    if negative:
        raise NegativeCoordinate('point %s leaves the nonnegative orthant' % (negative[0],),
                                 point=negative[0])
    if _affine_rank(lattice) < m:
        raise NotFullDimensional('points span less than %d dimensions' % m, dim=m)

    simplices = ()
    if m == 1:
        lo, hi = lattice[0][0], lattice[-1][0]
        facets = {Facet((1,), -lo), Facet((-1,), hi)}
    else:
        try:
            hull = ConvexHull(np.array(lattice, dtype=float))
        except QhullError as exc:
            raise NotFullDimensional('convex hull failed: %s' % exc)
        simplices = tuple(tuple(int(i) for i in simplex) for simplex in hull.simplices)
        centroid = [Fraction(sum(column), len(lattice)) for column in zip(*lattice)]
        facets = set()
        for simplex in simplices:
            corner = [lattice[i] for i in simplex]
            normal = _hyperplane_normal(corner)
            offset = -_dot(normal, corner[0])
            if _dot(centroid, normal) + offset < 0:
                normal, offset = tuple(-c for c in normal), -offset
            facets.add(Facet(normal, offset))
    facets = tuple(sorted(facets, key=lambda facet: (facet.normal, facet.offset)))

    vertices = []
    for point in lattice:
        active = [facet.normal for facet in facets if facet.slack(point) == 0]
        if len(active) >= m and sympy.Matrix(active).rank() == m:
            vertices.append(point)
    degree = max(sum(vertex) for vertex in vertices)
    if p is None:
        p = degree
    elif int(p) != p or p < degree:
        raise ConfigError('p=%s must be an integer no smaller than the degree %d' % (p, degree))

    index = {point: i for i, point in enumerate(lattice)}
    remap = {index[vertex]: i for i, vertex in enumerate(vertices)}
    simplices = tuple(tuple(remap[i] for i in simplex) for simplex in simplices
                      if all(i in remap for i in simplex))
    polytope = LatticePolytope(tuple(vertices), facets, int(p), simplices)
    log.debug('polytope with %d vertices and %d facets, p=%d',
              len(vertices), len(facets), polytope.p)
    return polytope


def simplex(m: int, p: int = 1) -> LatticePolytope:
    """The dilated standard simplex pΣ."""
    corners = [tuple(0 for _ in range(m))]
    for j in range(m):
        corners.append(tuple(p if k == j else 0 for k in range(m)))
    return from_vertices(corners)


# =====
# Faces
# =====

def _face_id(polytope: LatticePolytope, active: FrozenSet[int]) -> str:
    key = ';'.join(
        '%s:%d' % (','.join(str(c) for c in polytope.facets[i].normal), polytope.facets[i].offset)
        for i in sorted(active))
    return 'f' + hashlib.sha1(('%d|%s' % (polytope.dim, key)).encode('ascii')).hexdigest()[:10]


def _tangent_basis(vertices: Sequence[IntVector]) -> Tuple[IntVector, ...]:
    if len(vertices) < 2:
        return ()
    base = vertices[0]
    directions = [tuple(c - b for c, b in zip(vertex, base)) for vertex in vertices[1:]]
    _, pivots = sympy.Matrix(directions).T.rref()
    return tuple(_primitive(directions[i]) for i in pivots)


def _enumerate_faces(polytope: LatticePolytope) -> Tuple[Face, ...]:
    vertex_active = {
        vertex: frozenset(i for i, facet in enumerate(polytope.facets) if facet.slack(vertex) == 0)
        for vertex in polytope.vertices}

    # active sets of faces are closed under intersection
    family = set(vertex_active.values())
    frontier = list(family)
    while frontier:
        discovered = []
        for left, right in itertools.product(frontier, list(family)):
            meet = left & right
            if meet not in family:
                family.add(meet)
                discovered.append(meet)
        frontier = discovered
    family.add(frozenset())

    result = []
    for active in family:
        closure = tuple(vertex for vertex in polytope.vertices if active <= vertex_active[vertex])
        sample = tuple(Fraction(sum(column), len(closure)) for column in zip(*closure))
        result.append(Face(
            id=_face_id(polytope, active),
            dim=_affine_rank(closure),
            active=tuple(sorted(active)),
            vertices=closure,
            tangent_basis=_tangent_basis(closure),
            sample=sample,
            generators=tuple(tuple(-c for c in polytope.facets[i].normal) for i in sorted(active))))
    result.sort(key=lambda face: (face.dim, face.vertices))
    return tuple(result)


def faces(polytope: LatticePolytope) -> Tuple[Face, ...]:
    return polytope.faces


def face_containing(polytope: LatticePolytope, x: Sequence) -> Face:
    point = tuple(Fraction(value) for value in x)
    if len(point) != polytope.dim:
        raise ConfigError('point %s has the wrong dimension' % (x,))
    slacks = [facet.slack(point) for facet in polytope.facets]
    if min(slacks) < 0:
        raise OutsidePolytope('point %s lies outside the polytope' % (x,),
                              facet=slacks.index(min(slacks)))
    return polytope._faces_by_active[frozenset(i for i, value in enumerate(slacks) if value == 0)]


# ===========
# Invariants
# ===========

def is_delzant(polytope: LatticePolytope) -> DelzantCertificate:
    """
    Every vertex meets exactly m facets whose primitive normals form a lattice basis.
    """
    m = polytope.dim
    for vertex in polytope.vertices:
        active = [facet.normal for facet in polytope.facets if facet.slack(vertex) == 0]
        if len(active) != m:
            return DelzantCertificate(
                False, vertex, 'vertex %s lies on %d facets' % (vertex, len(active)))
        determinant = sympy.Matrix(active).det()
        if abs(determinant) != 1:
            return DelzantCertificate(
                False, vertex, 'normals at vertex %s have determinant %s' % (vertex, determinant))
    return DelzantCertificate(True)


def volume(polytope: LatticePolytope) -> Fraction:
    """Exact volume from the boundary triangulation, fanned from the first vertex."""
    m = polytope.dim
    if m == 1:
        return Fraction(polytope.vertices[-1][0] - polytope.vertices[0][0])
    apex = polytope.vertices[0]
    total = 0
    for simplex in polytope.simplices:
        rows = [[c - a for c, a in zip(polytope.vertices[i], apex)] for i in simplex]
        total += abs(sympy.Matrix(rows).det())
    return Fraction(int(total), math.factorial(m))


@functools.lru_cache(maxsize=64)
def _lattice_points(polytope: LatticePolytope, N: int, cap: int) -> np.ndarray:
    corners = np.array(polytope.vertices, dtype=np.int64) * N
    lo, hi = corners.min(axis=0), corners.max(axis=0)
    box = int(np.prod(hi - lo + 1))
    if box > cap:
        raise LatticeOverflow(
            'bounding box of %dP has %d points, cap is %d' % (N, box, cap), N=N, box=box, cap=cap)
    mesh = np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(lo, hi)], indexing='ij')
    candidates = np.stack([axis.ravel() for axis in mesh], axis=1)
    normals = np.array([facet.normal for facet in polytope.facets], dtype=np.int64)
    offsets = np.array([facet.offset for facet in polytope.facets], dtype=np.int64)
    inside = (candidates @ normals.T + N * offsets >= 0).all(axis=1)
    points = candidates[inside]
    points.setflags(write=False)
    log.debug('%d lattice points in %dP', len(points), N)
    return points


def lattice_points(polytope: LatticePolytope, N: int, cap: int = LATTICE_CAP_DEFAULT) -> np.ndarray:
    """
    Lattice points of NP as a read-only (k, m) integer array, lexicographically sorted.
    """
    if N < 1:
        raise ConfigError('N must be a positive integer, got %s' % N)
    return _lattice_points(polytope, int(N), int(cap))


def boundary_decomposition(polytope: LatticePolytope) -> BoundaryDecomposition:
    """
    Splits the proper faces of a plane polytope into those meeting pΣ° and those
    on the boundary of pΣ, and measures the lattice length of the latter.
    """
    if polytope.dim != 2:
        raise DimensionUnsupported('boundary decomposition needs m = 2', dim=polytope.dim)
    p = polytope.p
    interior, exterior = [], []
    for face in polytope.faces:
        if face.is_interior:
            continue
        x1, x2 = face.sample
        if x1 > 0 and x2 > 0 and x1 + x2 < p:
            interior.append(face)
        else:
            exterior.append(face)

    segments = {}
    for simplex_facet in SimplexFacet:
        along = [simplex_facet.coordinate(vertex) for vertex in polytope.vertices
                 if simplex_facet.contains(vertex, p)]
        segments[simplex_facet] = (min(along), max(along)) if along else None
    length = sum(hi - lo for lo, hi in filter(None, segments.values()))
    return BoundaryDecomposition(tuple(interior), tuple(exterior), segments, length)
