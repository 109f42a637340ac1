"""Structure validation and classification of almost Hermitian charts.

Checks produce residuals; a flag passes iff its residual is at most the
tolerance.  Everything is deterministic given (chart, points, seed).
"""

import numpy as np

from . import curvature as cv
from . import frames as fr


class MissingStructureError(ValueError):
    pass


HOLOMORPHIC = "holomorphic"
ANTIHOLOMORPHIC = "antiholomorphic"
COHOLOMORPHIC = "coholomorphic"
NONE = "none"

_ANGLE_TOL = 1e-8  # principal-angle threshold for subspace comparisons


def validate_structure(chart, point, tolerance=1e-9):
    """Max-norm residuals (|J^2 + I|, |g(J.,J.) - g|) at a point."""
    J = chart.j_at(point)
    if J is None:
        raise MissingStructureError(f"chart {chart.name!r} has no almost complex structure")
    g = chart.metric_at(point)
    r_square = float(np.max(np.abs(J @ J + np.eye(chart.dim))))
    r_compat = float(np.max(np.abs(J.T @ g @ J - g)))
    return r_square, r_compat, (r_square <= tolerance and r_compat <= tolerance)


def nabla_j(chart, point):
    """Covariant derivative (nabla J)[k,i,j] = nabla_k J^i_j."""
    J = chart.j_at(point)
    if J is None:
        raise MissingStructureError(f"chart {chart.name!r} has no almost complex structure")
    dJ = chart.dj_at(point)
    gamma = cv.christoffel(chart, point)
    return (dJ + np.einsum("ikm,mj->kij", gamma, J)
            - np.einsum("mkj,im->kij", gamma, J))


def nabla_J_residuals(chart, point, sampler, samples=32):
    """(kahler_residual, nk_residual) at a point.

    kahler_residual is the max component of nabla J; nk_residual is the max
    g-norm of (nabla_X J) X over sampled unit X.
    """
    nj = nabla_j(chart, point)
    g = chart.metric_at(point)
    kahler = float(np.max(np.abs(nj)))
    nk = 0.0
    for _ in range(samples):
        X = fr.sample_orthonormal_set(g, 1, sampler)[0]
        v = np.einsum("kij,k,j->i", nj, X, X)
        nk = max(nk, float(np.sqrt(v @ g @ v)))
    return kahler, nk


def rk_residual(R4, J):
    """Max deviation of R(X,Y,Z,U) = R(JX,JY,JZ,JU) on basis vectors.

    The condition is tensorial, so checking coordinate indices is complete.
    """
    rot = np.einsum("ai,bj,ck,dl,abcd->ijkl", J, J, J, J, R4)
    return float(np.max(np.abs(R4 - rot)))


def plane_type(vectors, g, J):
    """Classify the span of ``vectors`` as (kind, half_dim).

    kind is one of "holomorphic", "antiholomorphic", "coholomorphic", "none";
    half_dim is n for a coholomorphic (2n+1)-plane, else None.
    """
    g = np.asarray(g, dtype=float)
    basis = fr.gram_schmidt(vectors, g)
    jbasis = fr.gram_schmidt([J @ v for v in basis], g)
    k = len(basis)
    # principal cosines between span and J(span) w.r.t. g
    cross = np.array([[u @ g @ v for v in jbasis] for u in basis])
    cosines = np.linalg.svd(cross, compute_uv=False)
    n_common = int(np.sum(cosines > 1.0 - _ANGLE_TOL))
    n_orth = int(np.sum(cosines < _ANGLE_TOL))
    if n_common == k and k % 2 == 0:
        return HOLOMORPHIC, None
    if n_orth == k:
        return ANTIHOLOMORPHIC, None
    if k % 2 == 1 and n_common == k - 1:
        return COHOLOMORPHIC, (k - 1) // 2
    return NONE, None


def _antiholomorphic_pair(g, J, sampler):
    Y = fr.sample_orthonormal_set(g, 1, sampler)[0]
    X = fr.sample_orthonormal_set(g, 1, sampler, constraints=[Y, J @ Y])[0]
    return X, Y


def constancy_report(chart, points, sampler, samples=32, tolerance=1e-8):
    """Per-point and cross-point constancy of the three chart invariants:
    holomorphic sectional curvature, antiholomorphic sectional curvature,
    and the constant-type value.

    Returns a list of check records; the reported constant is the sample
    mean, "pointwise" passes when every per-point std is within tolerance,
    "global" additionally requires the per-point means to agree.
    """
    stats = {"holomorphic_sectional": [], "antiholomorphic_sectional": [],
             "constant_type": []}
    for point in points:
        pd = cv.point_data(chart, point, with_weyl=False)
        if pd.J is None:
            raise MissingStructureError(f"chart {chart.name!r} has no almost complex structure")
        hvals, kvals, lvals = [], [], []
        for _ in range(samples):
            X = fr.sample_orthonormal_set(pd.g, 1, sampler)[0]
            hvals.append(cv.holomorphic_sectional(pd.riemann, pd.g, pd.J, X))
            X, Y = _antiholomorphic_pair(pd.g, pd.J, sampler)
            kvals.append(cv.sectional(pd.riemann, pd.g, X, Y))
            lvals.append(cv.lambda_type(pd.riemann, pd.g, pd.J, X, Y))
        for key, vals in (("holomorphic_sectional", hvals),
                          ("antiholomorphic_sectional", kvals),
                          ("constant_type", lvals)):
            stats[key].append((float(np.mean(vals)), float(np.std(vals))))

    report = []
    for name, per_point in stats.items():
        means = [m for m, _ in per_point]
        pointwise = max(s for _, s in per_point)
        overall = float(np.mean(means))
        cross = max(abs(m - overall) for m in means) if len(means) > 1 else 0.0
        report.append({
            "name": name,
            "constant": overall,
            "per_point_means": means,
            "residual": float(pointwise),
            "cross_point_residual": float(cross),
            "pass": pointwise <= tolerance,
            "global_pass": pointwise <= tolerance and cross <= tolerance,
            "tolerance": tolerance,
            "samples": samples,
            "seed": sampler.seed,
        })
    return report


def classify_chart(chart, points, seed=0, samples=32, tolerance=1e-8,
                   nk_tolerance=1e-6):
    """Full classification record for a chart with an almost complex
    structure: compatibility, Kahler/NK/RK flags, conformal flatness, and
    the constancy report."""
    sampler = fr.FrameSampler(seed, chart.dim)
    checks = []

    def record(name, residual, tol):
        checks.append({"name": name, "residual": float(residual),
                       "pass": bool(residual <= tol), "tolerance": tol,
                       "samples": samples, "seed": seed})

    r_sq = r_comp = 0.0
    kahler = nk = rk = 0.0
    weyl_norm = 0.0
    for point in points:
        a, b, _ = validate_structure(chart, point, tolerance)
        r_sq, r_comp = max(r_sq, a), max(r_comp, b)
        ka, nka = nabla_J_residuals(chart, point, sampler, samples)
        kahler, nk = max(kahler, ka), max(nk, nka)
        pd = cv.point_data(chart, point, with_weyl=chart.dim >= 4)
        rk = max(rk, rk_residual(pd.riemann, pd.J))
        if pd.weyl is not None:
            scale = max(np.max(np.abs(pd.riemann)), 1.0)
            weyl_norm = max(weyl_norm, float(np.max(np.abs(pd.weyl)) / scale))

    record("j_squared", r_sq, tolerance)
    record("j_compatible", r_comp, tolerance)
    record("kahler", kahler, tolerance)
    record("nearly_kahler", nk, nk_tolerance)
    record("rk", rk, tolerance)
    if chart.dim >= 4:
        record("conformally_flat", weyl_norm, tolerance)
    constancy = constancy_report(chart, points, sampler, samples, tolerance)
    return {"chart": chart.name, "points": [list(map(float, p)) for p in points],
            "checks": checks, "constancy": constancy}
