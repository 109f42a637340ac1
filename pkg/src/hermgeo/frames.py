"""Metric orthonormalization and reproducible frame sampling.

Random draws use numpy's PCG64 generator with an explicit seed, so identical
(seed, dimension) pairs give bit-identical frames on every platform.
"""

import numpy as np


class RankDeficiencyError(ValueError):
    pass


class IncompatibleStructureError(ValueError):
    pass


_PIVOT = 1e-10


class FrameSampler:
    """Deterministic source of raw vectors for frame construction.

    Single-owner mutable state: concurrent workers should each hold their own
    sampler, seeded by (base seed, worker index).
    """

    def __init__(self, seed, dimension):
        self.seed = int(seed)
        self.dimension = int(dimension)
        self._rng = np.random.Generator(np.random.PCG64(self.seed))

    def draw(self, count=1):
        """Raw vectors with components uniform in [-1, 1), shape (count, dim)."""
        return self._rng.uniform(-1.0, 1.0, size=(count, self.dimension))

    def spawn(self, index):
        """Independent sampler for worker ``index``."""
        return FrameSampler(self.seed * 1000003 + index, self.dimension)


def gram_schmidt(vectors, g):
    """Orthonormalize ``vectors`` with respect to the metric ``g``.

    Modified Gram-Schmidt with one reorthogonalization pass; adequate for the
    dimensions in play (<= 16).  Raises RankDeficiencyError when a pivot drops
    below 1e-10 of the leading norm.
    """
    g = np.asarray(g, dtype=float)
    vecs = [np.array(v, dtype=float) for v in vectors]
    if not vecs:
        return []
    lead = np.sqrt(max(v @ g @ v for v in vecs))
    out = []
    for v in vecs:
        for _ in range(2):
            for u in out:
                v = v - (u @ g @ v) * u
        nrm = np.sqrt(v @ g @ v)
        if nrm <= _PIVOT * lead:
            raise RankDeficiencyError(
                f"vector set is rank deficient (pivot {nrm:.3e} vs lead {lead:.3e})")
        out.append(v / nrm)
    return out


def sample_orthonormal_set(g, k, sampler, constraints=None):
    """Draw ``k`` g-orthonormal vectors, each g-orthogonal to ``constraints``."""
    g = np.asarray(g, dtype=float)
    dim = g.shape[0]
    constraints = [np.asarray(c, dtype=float) for c in (constraints or [])]
    if k + len(constraints) > dim:
        raise RankDeficiencyError(
            f"cannot fit {k} vectors orthogonal to {len(constraints)} constraints in dim {dim}")
    cbasis = gram_schmidt(constraints, g) if constraints else []
    out = []
    # rejection is only against numerically degenerate draws, which are
    # measure-zero; retry keeps determinism since the sampler is sequential
    for _ in range(k):
        for _attempt in range(64):
            v = sampler.draw(1)[0]
            try:
                v = gram_schmidt([*cbasis, *out, v], g)[-1]
            except RankDeficiencyError:
                continue
            out.append(v)
            break
        else:
            raise RankDeficiencyError("could not sample an independent vector")
    return out


def validate_hermitian_pair(g, J, tol=1e-9):
    """Residuals (|J^2 + I|, |g(J.,J.) - g|) in max norm; raise above ``tol``."""
    g = np.asarray(g, dtype=float)
    J = np.asarray(J, dtype=float)
    r_square = np.max(np.abs(J @ J + np.eye(J.shape[0])))
    r_compat = np.max(np.abs(J.T @ g @ J - g))
    if r_square > tol or r_compat > tol:
        raise IncompatibleStructureError(
            f"almost complex structure incompatible: |J^2+I|={r_square:.3e}, "
            f"|J^T g J - g|={r_compat:.3e}")
    return r_square, r_compat


def adapted_hermitian_frame(g, J, sampler):
    """A g-orthonormal frame (e_1, Je_1, ..., e_m, Je_m).

    Every even-position vector is exactly J applied to its predecessor.
    """
    g = np.asarray(g, dtype=float)
    J = np.asarray(J, dtype=float)
    validate_hermitian_pair(g, J)
    dim = g.shape[0]
    if dim % 2:
        raise IncompatibleStructureError("almost complex structure needs even dimension")
    frame = []
    for _ in range(dim // 2):
        e = sample_orthonormal_set(g, 1, sampler, constraints=frame)[0]
        frame.append(e)
        frame.append(J @ e)
    return frame
