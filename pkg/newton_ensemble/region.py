"""
Allowed and forbidden regions, the decay function b and the limit potential.

For a point ``s`` outside the allowed region the solver looks for a face F of P,
cone coefficients ``c >= 0`` and ``tau = sum_i c_i u_i`` over the facets active
on F such that ``q = p mu_sigma(s + tau)`` lies on the closure of F. In log
coordinates this is ``L(q/p) - tau = s`` with ``-tau`` in the normal cone of F.

Per face, ``c`` is the minimizer of the strictly convex function

    ..code::

        h(c) = p log(1 + sum_j exp((s + U c)_j)) + <a, c>

whose stationarity equations say exactly that ``p mu_sigma(s + U c)`` satisfies
the facet equations of F. Its Newton Hessian is ``p U^T (diag(mu) - mu mu^T) U``,
i.e. the inverse Jacobian of L restricted to the cone directions. Every point
is solved in batches so that grids cost one vectorized Newton run per face.
"""
import functools
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import simpson

from newton_ensemble.config import Tolerances
from newton_ensemble.errors import ConfigError, NoFaceAccepted, NonDelzant, TransitionPoint
from newton_ensemble.geometry import lmap, mu_sigma, softplus_logsum
from newton_ensemble.polytope import Face, LatticePolytope, is_delzant

__all__ = [
    'RegionResult',
    'RegionBatch',
    'PsiHessian',
    'RegionSolver',
    'MONGE_AMPERE_NORMALIZATION',
    'region_solver',
    'solve_region',
    'classify',
    'q_map',
    'decay_b',
    'decay_b_action',
    'u_infty',
    'grad_b',
    'psi_hessian',
    'psi_hessian_batch',
    'monge_ampere_mass',
]

log = logging.getLogger(__name__)

# Factor between det(Hess u_infty) ds and the zero current measure; with it the
# total Monge–Ampère mass of u_infty over R^m is Vol(P).
MONGE_AMPERE_NORMALIZATION = 1.0

_BACKTRACK_LIMIT = 60
_ARMIJO = 1e-4
_CHUNK = 1 << 16


@dataclass(frozen=True)
class RegionResult:
    face: Face
    tau: np.ndarray
    q: np.ndarray
    b: float
    residual: float
    transition: bool

    @property
    def allowed(self) -> bool:
        return self.face.is_interior


@dataclass(frozen=True)
class RegionBatch:
    """Solver output for an (n, m) array of points; ``face_index`` refers to ``faces``."""
    faces: Tuple[Face, ...]
    face_index: np.ndarray
    tau: np.ndarray
    q: np.ndarray
    b: np.ndarray
    residual: np.ndarray
    transition: np.ndarray
    accepted: np.ndarray

    def __len__(self):
        return len(self.face_index)

    @property
    def allowed(self) -> np.ndarray:
        return self.face_index == 0

    @property
    def face_dims(self) -> np.ndarray:
        return np.array([face.dim for face in self.faces])[self.face_index]

    def result(self, i: int) -> RegionResult:
        return RegionResult(
            face=self.faces[self.face_index[i]],
            tau=self.tau[i].copy(),
            q=self.q[i].copy(),
            b=float(self.b[i]),
            residual=float(self.residual[i]),
            transition=bool(self.transition[i]))


@dataclass(frozen=True)
class PsiHessian:
    matrix: np.ndarray
    rank: int
    face: Face


class _FaceChart:
    """Constant data of one candidate face: active and inactive facet inequalities."""

    def __init__(self, polytope: LatticePolytope, face: Face):
        self.face = face
        inactive = [i for i in range(len(polytope.facets)) if i not in face.active]
        self.normals = polytope.normals[list(face.active)].T
        self.offsets = polytope.offsets[list(face.active)]
        self.inactive_normals = polytope.normals[inactive].T
        self.inactive_offsets = polytope.offsets[inactive]
        self.vertex_target = None
        if face.dim == 0:
            self.vertex_target = lmap(np.array(face.vertices[0], dtype=float) / polytope.p)
            self.inverse_normals = np.linalg.inv(self.normals)


class RegionSolver:
    """
    Region classification for one Delzant polytope.

    Candidate faces are the proper faces whose relative interior lies in pΣ°,
    tried in order of decreasing dimension; the first accepting face wins.
    """

    def __init__(self, polytope: LatticePolytope, tolerances: Optional[Tolerances] = None):
        certificate = is_delzant(polytope)
        if not certificate:
            raise NonDelzant(certificate.reason, vertex=certificate.vertex)
        self.polytope = polytope
        self.tolerances = tolerances or Tolerances()
        p = polytope.p

        def in_open_simplex(face: Face) -> bool:
            return min(face.sample) > 0 and sum(face.sample) < p

        candidates = [face for face in polytope.faces if not face.is_interior and in_open_simplex(face)]
        candidates.sort(key=lambda face: (-face.dim, face.id))
        self.charts = [_FaceChart(polytope, face) for face in candidates]
        self.faces = (polytope.interior,) + tuple(chart.face for chart in self.charts)

        inner = [i for i in range(len(polytope.facets))
                 if any(face.dim == polytope.dim - 1 and face.active == (i,) for face in candidates)]
        self.inner_normals = polytope.normals[inner].T
        self.inner_offsets = polytope.offsets[inner]
        log.debug('region solver: %d candidate faces, %d inner facets', len(self.charts), len(inner))

    # ==============
    # Face solutions
    # ==============

    def _objective(self, S: np.ndarray, c: np.ndarray, chart: _FaceChart):
        T = S + c @ chart.normals.T
        softplus = softplus_logsum(T)
        mu = np.exp(T - softplus[:, None])
        return T, mu, self.polytope.p * softplus + c @ chart.offsets

    def _newton(self, S: np.ndarray, chart: _FaceChart):
        p = self.polytope.p
        tolerances = self.tolerances
        U, a = chart.normals, chart.offsets
        c = np.zeros((len(S), U.shape[1]))
        _, mu, value = self._objective(S, c, chart)
        gradient = p * mu @ U + a
        for _ in range(tolerances.max_newton):
            pending = np.flatnonzero(np.abs(gradient).max(axis=1) > tolerances.newton_target)
            if not len(pending):
                break
            mu_p, grad_p = mu[pending], gradient[pending]
            mu_u = mu_p @ U
            hessian = p * (np.einsum('ni,ik,il->nkl', mu_p, U, U) - np.einsum('nk,nl->nkl', mu_u, mu_u))
            # saturated moment maps make the Hessian numerically singular
            ridge = 1e-14 * (1.0 + np.trace(hessian, axis1=1, axis2=2))
            hessian = hessian + ridge[:, None, None] * np.eye(U.shape[1])
            step = -np.linalg.solve(hessian, grad_p[..., None])[..., 0]
            slope = (grad_p * step).sum(axis=1)

            base_c, base_value, S_p = c[pending], value[pending], S[pending]
            scale = np.ones(len(pending))
            done = np.zeros(len(pending), dtype=bool)
            new_c = base_c.copy()
            for _ in range(_BACKTRACK_LIMIT):
                todo = np.flatnonzero(~done)
                trial = base_c[todo] + scale[todo, None] * step[todo]
                _, _, trial_value = self._objective(S_p[todo], trial, chart)
                ok = trial_value <= base_value[todo] + _ARMIJO * scale[todo] * slope[todo] \
                    + 1e-13 * np.abs(base_value[todo])
                new_c[todo[ok]] = trial[ok]
                done[todo[ok]] = True
                scale[todo[~ok]] *= 0.5
                if done.all():
                    break
            c[pending] = new_c
            _, mu_new, value_new = self._objective(S_p, new_c, chart)
            mu[pending], value[pending] = mu_new, value_new
            gradient[pending] = p * mu_new @ U + a
        else:
            log.debug('face %s: Newton cap reached for %d points', chart.face.id,
                      int((np.abs(gradient).max(axis=1) > tolerances.residual).sum()))
        return c, np.abs(gradient).max(axis=1)

    def _solve_face(self, S: np.ndarray, chart: _FaceChart):
        if chart.vertex_target is not None:
            c = (chart.vertex_target - S) @ chart.inverse_normals.T
            residual = np.zeros(len(S))
        else:
            c, residual = self._newton(S, chart)
        T = S + c @ chart.normals.T
        q = self.polytope.p * mu_sigma(T)
        strictness = c.min(axis=1)
        if chart.inactive_normals.shape[1]:
            slack = q @ chart.inactive_normals + chart.inactive_offsets
            strictness = np.minimum(strictness, slack.min(axis=1))
            face_ok = slack.min(axis=1) >= -self.tolerances.face
        else:
            face_ok = np.ones(len(S), dtype=bool)
        accept = (residual < self.tolerances.residual) & (c.min(axis=1) >= -self.tolerances.cone) & face_ok
        return accept, T - S, q, residual, strictness

    # ===========
    # Batch solve
    # ===========

    def solve_batch(self, points) -> RegionBatch:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.polytope.dim:
            raise ConfigError('points have dimension %d, polytope has %d'
                              % (points.shape[1], self.polytope.dim))
        parts = [self._solve_chunk(points[start:start + _CHUNK])
                 for start in range(0, max(len(points), 1), _CHUNK)]
        if len(parts) == 1:
            return parts[0]
        return RegionBatch(
            faces=self.faces,
            **{name: np.concatenate([getattr(part, name) for part in parts])
               for name in ('face_index', 'tau', 'q', 'b', 'residual', 'transition', 'accepted')})

    def _solve_chunk(self, S: np.ndarray) -> RegionBatch:
        n, p = len(S), self.polytope.p
        tolerances = self.tolerances
        q = p * mu_sigma(S)
        tau = np.zeros_like(S)
        residual = np.zeros(n)
        face_index = np.zeros(n, dtype=int)
        accepted = np.ones(n, dtype=int)
        strictness = np.full(n, np.inf)

        if self.inner_normals.shape[1]:
            inner_slack = (q @ self.inner_normals + self.inner_offsets).min(axis=1)
        else:
            inner_slack = np.full(n, np.inf)
        allowed = inner_slack > tolerances.face
        # the closed allowed region also accepts points on its boundary
        interior_accepts = inner_slack >= -tolerances.face
        strictness[allowed] = inner_slack[allowed]

        forbidden = np.flatnonzero(~allowed)
        if len(forbidden):
            S_f = S[forbidden]
            selected = np.full(len(forbidden), -1)
            count = np.zeros(len(forbidden), dtype=int)
            for index, chart in enumerate(self.charts, start=1):
                accept, tau_f, q_f, residual_f, strict_f = self._solve_face(S_f, chart)
                count += accept
                fresh = accept & (selected < 0)
                selected[fresh] = index
                rows = forbidden[fresh]
                tau[rows], q[rows], residual[rows] = tau_f[fresh], q_f[fresh], residual_f[fresh]
                strictness[rows] = strict_f[fresh]
            missing = selected < 0
            if missing.any():
                raise NoFaceAccepted(
                    'no face accepted %d of %d points' % (int(missing.sum()), len(forbidden)),
                    points=S_f[missing][:5].tolist(),
                    polytope=self.polytope.vertices)
            face_index[forbidden] = selected
            accepted[forbidden] = count + interior_accepts[forbidden]

        T = S + tau
        b = (q * tau).sum(axis=1) + p * (softplus_logsum(S) - softplus_logsum(T))
        b[allowed] = 0.0
        # a slack near zero alone is no transition: q may approach a facet of pΣ deep inside R_F
        transition = (accepted > 1) & (strictness < tolerances.transition)
        return RegionBatch(self.faces, face_index, tau, q, np.maximum(b, 0.0), residual,
                           transition, accepted)

    # ===================
    # Hessian of u_infty
    # ===================

    def hessian_batch(self, points, step: Optional[float] = None):
        """
        Central differences of q at every point, stencil points solved in one batch.

        :return: (hessians, base batch, mask of points whose stencil points change face)
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        n, m = points.shape
        h = step or self.tolerances.hessian_step
        offsets = np.concatenate([np.eye(m) * h, -np.eye(m) * h])
        stencil = (points[:, None, :] + offsets[None, :, :]).reshape(-1, m)
        base = self.solve_batch(points)
        stencil_batch = self.solve_batch(stencil)
        q = stencil_batch.q.reshape(n, 2 * m, m)
        jacobian = (q[:, :m, :] - q[:, m:, :]) / (2.0 * h)
        hessians = 0.5 * (jacobian + np.swapaxes(jacobian, 1, 2))
        stencil_faces = stencil_batch.face_index.reshape(n, 2 * m)
        straddle = (stencil_faces != base.face_index[:, None]).any(axis=1) | base.transition
        return hessians, base, straddle


@functools.lru_cache(maxsize=32)
def region_solver(polytope: LatticePolytope, tolerances: Optional[Tolerances] = None) -> RegionSolver:
    return RegionSolver(polytope, tolerances)


def _single(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return s.reshape(1, -1)


def solve_region(polytope: LatticePolytope, s, tolerances: Optional[Tolerances] = None) -> RegionResult:
    return region_solver(polytope, tolerances).solve_batch(_single(s)).result(0)


def classify(polytope: LatticePolytope, points, tolerances: Optional[Tolerances] = None) -> RegionBatch:
    return region_solver(polytope, tolerances).solve_batch(points)


def q_map(polytope: LatticePolytope, s, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """Gradient of u_infty: ``p mu_sigma(s)`` when allowed, a boundary point of P otherwise."""
    return solve_region(polytope, s, tolerances).q


def decay_b(polytope: LatticePolytope, s, tolerances: Optional[Tolerances] = None) -> float:
    return solve_region(polytope, s, tolerances).b


def decay_b_action(
        polytope: LatticePolytope,
        s,
        steps: int = 10000,
        tolerances: Optional[Tolerances] = None) -> float:
    """
    b as the integral of ``(q - p mu_sigma)`` along the straight path from s to s + tau.
    """
    if steps < 16:
        raise ConfigError('decay_b_action needs at least 16 steps, got %d' % steps)
    s = np.asarray(s, dtype=float)
    solver = region_solver(polytope, tolerances)
    start = solver.solve_batch(_single(s))
    tau = start.tau[0]
    if not np.any(tau):
        return 0.0
    r = np.linspace(0.0, 1.0, steps + 1)
    path = s[None, :] + r[:, None] * tau[None, :]
    along = solver.solve_batch(path)
    integrand = ((along.q - polytope.p * mu_sigma(path)) * tau).sum(axis=1)
    return float(simpson(integrand, x=r))


def u_infty(polytope: LatticePolytope, s, tolerances: Optional[Tolerances] = None) -> float:
    s = np.asarray(s, dtype=float)
    return float(polytope.p * softplus_logsum(s) - decay_b(polytope, s, tolerances))


def grad_b(polytope: LatticePolytope, s, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return polytope.p * mu_sigma(s) - q_map(polytope, s, tolerances)


def _rank(matrix: np.ndarray, threshold: float) -> int:
    eigenvalues = np.linalg.eigvalsh(matrix)
    return int((eigenvalues > threshold * (np.trace(matrix) + 1.0)).sum())


def psi_hessian(
        polytope: LatticePolytope,
        s,
        h: Optional[float] = None,
        tolerances: Optional[Tolerances] = None) -> PsiHessian:
    """
    Hessian of u_infty in s with its numerical rank.

    The rank is expected to equal dim F for the face F owning s. Deep inside a
    forbidden region q saturates towards a face of the dual polytope, so the
    nonzero eigenvalues can drop below ``tolerances.rank``; a mismatch is logged
    as a warning and the measured rank is returned unchanged.

    :raises TransitionPoint: at flagged points and where a difference step changes region
    """
    solver = region_solver(polytope, tolerances)
    hessians, base, straddle = solver.hessian_batch(_single(s), h)
    if straddle[0]:
        raise TransitionPoint('Hessian undefined at a transition point', s=list(np.ravel(s)),
                              face=base.faces[base.face_index[0]].id)
    face = base.faces[base.face_index[0]]
    rank = _rank(hessians[0], solver.tolerances.rank)
    if rank != face.dim:
        log.warning('Hessian rank %d differs from face dimension %d at s=%s', rank, face.dim, s)
    return PsiHessian(hessians[0], rank, face)


def psi_hessian_batch(polytope: LatticePolytope, points, h: Optional[float] = None,
                      tolerances: Optional[Tolerances] = None):
    """Hessians, ranks and face dimensions over many points; transition points get rank -1."""
    solver = region_solver(polytope, tolerances)
    hessians, base, straddle = solver.hessian_batch(points, h)
    ranks = np.array([_rank(matrix, solver.tolerances.rank) for matrix in hessians])
    ranks[straddle] = -1
    return hessians, ranks, base


def monge_ampere_mass(
        polytope: LatticePolytope,
        bound: float = 12.0,
        count: Optional[int] = None,
        tolerances: Optional[Tolerances] = None) -> float:
    """
    Simpson quadrature of ``det Hess u_infty`` over the cube ``[-bound, bound]^m``.

    Tends to Vol(P) as the cube grows.
    """
    m = polytope.dim
    if count is None:
        # det jumps across the allowed region boundary, so the rule is first order there
        count = {1: 2401, 2: 481}.get(m, 61)
    axis = np.linspace(-bound, bound, count)
    mesh = np.meshgrid(*([axis] * m), indexing='ij')
    points = np.stack([grid.ravel() for grid in mesh], axis=1)
    hessians, _, _ = region_solver(polytope, tolerances).hessian_batch(points)
    density = np.linalg.det(hessians).reshape((count,) * m) * MONGE_AMPERE_NORMALIZATION
    for _ in range(m):
        density = simpson(density, x=axis, axis=-1)
    log.info('Monge–Ampère mass over [-%g, %g]^%d with %d nodes per axis: %.6f',
             bound, bound, m, count, float(density))
    return float(density)
