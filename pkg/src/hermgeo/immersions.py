"""Immersed submanifolds of a chart: induced metric, second fundamental
form, mean curvature, normal connection, and the two Codazzi-type residuals.

The pullback metric and the form components at a point are exact (symbolic
derivatives of the immersion map and the ambient metric); derivatives of
fields along the submanifold (the normal connection and the covariant
derivative of the form) use Richardson-extrapolated central differences,
since the Gram-Schmidt normal projection is not closed-form.
"""

from dataclasses import dataclass, field

import numpy as np

from . import curvature as cv
from . import expressions as ex
from .frames import RankDeficiencyError, gram_schmidt

_RANK_TOL = 1e-8
_FD_STEP = 1e-5


@dataclass
class Immersion:
    coordinates: list                 # k sub-chart coordinate names
    target: cv.ManifoldChart
    map_exprs: list                   # target.dim expressions in the sub coordinates

    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def k(self):
        return len(self.coordinates)

    def bindings(self, u):
        return dict(zip(self.coordinates, u))

    def _jacobian_exprs(self):
        if "jac" not in self._cache:
            self._cache["jac"] = [
                [ex.differentiate(f, c) for c in self.coordinates]
                for f in self.map_exprs]
        return self._cache["jac"]

    def _hessian_exprs(self):
        if "hess" not in self._cache:
            jac = self._jacobian_exprs()
            self._cache["hess"] = [
                [[ex.differentiate(jac[p][a], c) for c in self.coordinates]
                 for a in range(self.k)] for p in range(len(self.map_exprs))]
        return self._cache["hess"]

    def point(self, u):
        b = self.bindings(u)
        return np.array([ex.evaluate(f, b) for f in self.map_exprs])

    def jacobian(self, u):
        b = self.bindings(u)
        jac = self._jacobian_exprs()
        F = np.array([[ex.evaluate(jac[p][a], b) for a in range(self.k)]
                      for p in range(len(self.map_exprs))])
        sv = np.linalg.svd(F, compute_uv=False)
        if sv[-1] <= _RANK_TOL * sv[0]:
            raise RankDeficiencyError(
                f"immersion rank deficient at {list(u)} (singular values {sv})")
        return F

    def induced_chart(self):
        """Exact pullback metric as a chart over the sub coordinates."""
        if "induced" not in self._cache:
            mapping = dict(zip(self.target.coordinates, self.map_exprs))
            gsub = [[ex.substitute(e, mapping) for e in row]
                    for row in self.target.metric]
            jac = self._jacobian_exprs()
            N, k = len(self.map_exprs), self.k
            G = []
            for a in range(k):
                row = []
                for b in range(k):
                    total = ex.Const(0.0)
                    for p in range(N):
                        for q in range(N):
                            total = ex.add(total, ex.mul(
                                ex.mul(jac[p][a], jac[q][b]), gsub[p][q]))
                    row.append(total)
                G.append(row)
            self._cache["induced"] = cv.ManifoldChart(
                name=f"{self.target.name}_pullback",
                coordinates=list(self.coordinates), metric=G)
        return self._cache["induced"]


@dataclass(frozen=True)
class SecondFundamentalData:
    u: np.ndarray
    point: np.ndarray                 # ambient coordinates
    tangent: np.ndarray               # (N, k) pushforward columns
    tangent_frame: list               # k ambient vectors, g-orthonormal
    normal_frame: list                # N-k ambient vectors, g-orthonormal
    induced: np.ndarray               # k x k pullback metric
    alpha: np.ndarray                 # (k, k, N) normal-valued form
    mean_curvature: np.ndarray        # ambient normal vector H
    umbilicity: float


def _normal_projector(frames_tangent, g):
    def project(v):
        for t in frames_tangent:
            v = v - (t @ g @ v) * t
        return v
    return project


def _frames_at(imm, u):
    x = imm.point(u)
    F = imm.jacobian(u)
    g_amb = imm.target.metric_at(x)
    tangent = gram_schmidt([F[:, a] for a in range(imm.k)], g_amb)
    N = imm.target.dim
    normal = []
    pool = tangent + normal
    for p in range(N):
        if len(normal) == N - imm.k:
            break
        cand = np.eye(N)[p]
        try:
            vec = gram_schmidt([*tangent, *normal, cand], g_amb)[-1]
        except RankDeficiencyError:
            continue
        # deterministic orientation: first nonzero component positive
        nz = np.flatnonzero(np.abs(vec) > 1e-10)
        if nz.size and vec[nz[0]] < 0:
            vec = -vec
        normal.append(vec)
    return x, F, g_amb, tangent, normal


def induced_metric(imm, u):
    x = imm.point(u)
    F = imm.jacobian(u)
    g_amb = imm.target.metric_at(x)
    return F.T @ g_amb @ F


def second_fundamental_form(imm, u):
    """Exact second fundamental form data at sub-chart point ``u``.

    alpha(d_a, d_b) is the normal projection of the second derivative of the
    immersion corrected by the ambient Christoffel symbols.  Sign convention:
    the outward-normal round sphere of radius r gets alpha = -(1/r) g n.
    """
    u = np.asarray(u, dtype=float)
    x, F, g_amb, tangent, normal = _frames_at(imm, u)
    gamma = cv.christoffel(imm.target, x)
    b = imm.bindings(u)
    hess = imm._hessian_exprs()
    N, k = imm.target.dim, imm.k
    project = _normal_projector(tangent, g_amb)

    alpha = np.zeros((k, k, N))
    for a in range(k):
        for c in range(a, k):
            second = np.array([ex.evaluate(hess[p][a][c], b) for p in range(N)])
            corr = np.einsum("lpm,p,m->l", gamma, F[:, a], F[:, c])
            val = project(second + corr)
            alpha[a, c] = val
            alpha[c, a] = val

    G = F.T @ g_amb @ F
    Gi = np.linalg.inv(G)
    H = np.einsum("ab,abl->l", Gi, alpha) / k

    scale = max(np.max(np.abs(alpha)),
                np.max(np.abs(G)) * max(np.sqrt(abs(H @ g_amb @ H)), 0.0), 1e-300)
    umb = np.max(np.abs(alpha - np.einsum("ab,l->abl", G, H))) / scale
    return SecondFundamentalData(
        u=u, point=x, tangent=F, tangent_frame=tangent, normal_frame=normal,
        induced=G, alpha=alpha, mean_curvature=H, umbilicity=float(umb))


def mean_curvature(data):
    """Mean curvature vector of precomputed second-fundamental-form data."""
    return data.mean_curvature


def umbilicity_residual(data):
    return data.umbilicity


def _richardson(field_fn, u, direction, h=_FD_STEP):
    u = np.asarray(u, dtype=float)
    d = np.asarray(direction, dtype=float)
    d_h = (field_fn(u + h * d) - field_fn(u - h * d)) / (2 * h)
    d_h2 = (field_fn(u + (h / 2) * d) - field_fn(u - (h / 2) * d)) / h
    return (4.0 * d_h2 - d_h) / 3.0


def _normal_derivative(imm, u, direction, field_fn):
    """D_X of a normal field given in ambient components along the immersion."""
    x, F, g_amb, tangent, _ = _frames_at(imm, u)
    gamma = cv.christoffel(imm.target, x)
    xi = field_fn(u)
    dxi = _richardson(field_fn, u, direction)
    Xamb = F @ np.asarray(direction, dtype=float)
    ambient = dxi + np.einsum("lpm,p,m->l", gamma, Xamb, xi)
    return _normal_projector(tangent, g_amb)(ambient)


def normal_connection_DH(imm, u, direction):
    """Normal-connection derivative D_X H for a sub-chart direction X."""
    h_field = lambda v: second_fundamental_form(imm, v).mean_curvature
    return _normal_derivative(imm, u, direction, h_field)


def codazzi_residuals(imm, u, triples=None, umbilical_tol=1e-8):
    """Residuals of the two normal-component curvature equations.

    The first compares the normal part of the ambient curvature against the
    antisymmetrized covariant derivative of the second fundamental form; the
    second against its totally umbilical reduction in terms of D H (reported
    only when the point is umbilical; None otherwise).
    """
    u = np.asarray(u, dtype=float)
    data = second_fundamental_form(imm, u)
    x, F, g_amb, tangent, _ = _frames_at(imm, u)
    project = _normal_projector(tangent, g_amb)
    R_amb = cv.riemann(imm.target, x)
    gi_amb = np.linalg.inv(g_amb)
    gamma_amb = cv.christoffel(imm.target, x)
    gamma_ind = cv.christoffel(imm.induced_chart(), u)
    k = imm.k
    if triples is None:
        triples = [(a, b, c) for a in range(k) for b in range(a + 1, k)
                   for c in range(k)]

    alpha_field = lambda v: second_fundamental_form(imm, v).alpha
    dalpha = {}

    def covariant_alpha(a, b, c):
        # (nabla-bar_a alpha)(b, c)
        if a not in dalpha:
            dxi = _richardson(alpha_field, u, np.eye(k)[a])
            dalpha[a] = dxi
        xi = data.alpha[b, c]
        ambient = dalpha[a][b, c] + np.einsum(
            "lpm,p,m->l", gamma_amb, F[:, a], xi)
        D = project(ambient)
        return (D - np.einsum("d,dl->l", gamma_ind[:, a, b], data.alpha[:, c])
                - np.einsum("d,dl->l", gamma_ind[:, a, c], data.alpha[b, :]))

    dh = [normal_connection_DH(imm, u, np.eye(k)[a]) for a in range(k)]

    r21 = 0.0
    r22 = 0.0
    for (a, b, c) in triples:
        lhs_vec = np.einsum("lm,ijkm,i,j,k->l", gi_amb, R_amb,
                            F[:, a], F[:, b], F[:, c])
        lhs = project(lhs_vec)
        rhs1 = covariant_alpha(a, b, c) - covariant_alpha(b, a, c)
        r21 = max(r21, float(np.max(np.abs(lhs - rhs1))))
        rhs2 = data.induced[b, c] * dh[a] - data.induced[a, c] * dh[b]
        r22 = max(r22, float(np.max(np.abs(lhs - rhs2))))

    if data.umbilicity > umbilical_tol:
        r22 = None
    return r21, r22
