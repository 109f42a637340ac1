"""Built-in benchmark charts with known invariants.

Each model carries an expected-invariant table used by the regression tests
and the CLI.  Closed-form structures are entered as expression strings; the
6-sphere's almost complex structure is defined pointwise through the
ambient 7-dimensional cross product and therefore uses the numeric
derivative fallback of the pipeline.
"""

from dataclasses import dataclass, field

import numpy as np

from . import expressions as ex
from .curvature import Embedding, ManifoldChart


class UnknownModelError(KeyError):
    pass


@dataclass(frozen=True)
class ModelDescriptor:
    name: str
    description: str
    defaults: dict = field(default_factory=dict)


def _parse_matrix(entries, coords):
    return [[ex.parse(entries[i][j], coords) for j in range(len(coords))]
            for i in range(len(coords))]


def _rho2(coords):
    return " + ".join(f"{c}^2" for c in coords)


def _canonical_j_entries(dim):
    rows = [["0"] * dim for _ in range(dim)]
    for k in range(dim // 2):
        rows[2 * k + 1][2 * k] = "1"
        rows[2 * k][2 * k + 1] = "-1"
    return rows


# ---------------------------------------------------------------------------
# octonion cross product on R^7

_FANO_TRIPLES = [(0, 1, 2), (0, 3, 4), (0, 6, 5), (1, 3, 5),
                 (1, 4, 6), (2, 3, 6), (2, 5, 4)]


def _octonion_table():
    eps = np.zeros((7, 7, 7))
    for (a, b, c) in _FANO_TRIPLES:
        for (i, j, k) in ((a, b, c), (b, c, a), (c, a, b)):
            eps[i, j, k] = 1.0
            eps[j, i, k] = -1.0
    return eps


_OCTONION_EPS = _octonion_table()


def octonion_cross(a, b):
    """7-dimensional cross product of imaginary octonions."""
    return np.einsum("ijk,i,j->k", _OCTONION_EPS, a, b)


def embedding_j_fn(coordinates, embedding):
    """Pointwise J on a chart, pulled back from an ambient cross-product rule.

    At a chart point u with embedding p(u) and Jacobian F, a chart vector v
    maps to J v = F^+ ((p/r) x (F v)) where F^+ is the metric-free
    pseudo-inverse; the cross product preserves the tangent space, so the
    pullback is exact.
    """
    if embedding.j_rule != "octonion_cross":
        raise ValueError(f"unknown ambient J rule {embedding.j_rule!r}")
    n = len(coordinates)
    jac_exprs = [[ex.differentiate(embedding.map_exprs[p], coordinates[a])
                  for a in range(n)] for p in range(embedding.ambient_dim)]

    def j_at(point):
        b = dict(zip(coordinates, point))
        p = np.array([ex.evaluate(e, b) for e in embedding.map_exprs])
        F = np.array([[ex.evaluate(jac_exprs[i][a], b) for a in range(n)]
                      for i in range(embedding.ambient_dim)])
        unit = p / embedding.radius
        W = np.column_stack([octonion_cross(unit, F[:, a]) for a in range(n)])
        return np.linalg.solve(F.T @ F, F.T @ W)

    return j_at


# ---------------------------------------------------------------------------
# model builders

def _flat_kahler(m=2):
    m = int(m)
    if m < 1:
        raise ValueError("complex dimension m must be >= 1")
    dim = 2 * m
    coords = [f"x{k + 1}" for k in range(dim)]
    metric = [["1" if i == j else "0" for j in range(dim)] for i in range(dim)]
    chart = ManifoldChart(
        name=f"flat_kahler_m{m}", coordinates=coords,
        metric=_parse_matrix(metric, coords),
        complex_structure=_parse_matrix(_canonical_j_entries(dim), coords),
        domain_hint=[(-1.0, 1.0)] * dim,
        expected={"scalar": 0.0, "hsc": 0.0, "kahler": True, "nk": True,
                  "rk": True, "conformally_flat": True, "constant_type": 0.0})
    return chart


def _round_sphere(n=4, r=1.0):
    n, r = int(n), float(r)
    if n < 2 or r <= 0:
        raise ValueError("need n >= 2 and radius r > 0")
    coords = [f"x{k + 1}" for k in range(n)]
    f = f"{4 * r ** 4!r}/({r * r!r} + {_rho2(coords)})^2"
    metric = [[f if i == j else "0" for j in range(n)] for i in range(n)]
    return ManifoldChart(
        name=f"round_sphere_n{n}", coordinates=coords,
        metric=_parse_matrix(metric, coords),
        domain_hint=[(-1.0, 1.0)] * n,
        expected={"sectional": 1.0 / r ** 2,
                  "scalar": n * (n - 1) / r ** 2,
                  "conformally_flat": True})


def _hyperbolic(n=2, K=1.0):
    n, K = int(n), float(K)
    if n < 2 or K <= 0:
        raise ValueError("need n >= 2 and K > 0")
    coords = [f"x{k + 1}" for k in range(n)]
    # Poincare ball of curvature -K; hint keeps points off the boundary
    f = f"(4/{K!r})/(1 - ({_rho2(coords)}))^2"
    metric = [[f if i == j else "0" for j in range(n)] for i in range(n)]
    lim = 0.9 / np.sqrt(n)
    return ManifoldChart(
        name=f"hyperbolic_n{n}", coordinates=coords,
        metric=_parse_matrix(metric, coords),
        domain_hint=[(-lim, lim)] * n,
        expected={"sectional": -K, "scalar": -n * (n - 1) * K,
                  "conformally_flat": True})


def _surface_factor(coords, curvature):
    """Conformal factor of a 2-dim space form of the given curvature."""
    rho2 = _rho2(coords)
    if curvature >= 0:
        return f"4/(1 + {curvature!r}*({rho2}))^2"
    return f"4/(1 - {-curvature!r}*({rho2}))^2"


def _product_K(K=1.0):
    K = float(K)
    if K <= 0:
        raise ValueError("need K > 0")
    coords = ["x1", "y1", "x2", "y2"]
    fs = _surface_factor(["x1", "y1"], K)
    fh = _surface_factor(["x2", "y2"], -K)
    metric = [[fs, "0", "0", "0"], ["0", fs, "0", "0"],
              ["0", "0", fh, "0"], ["0", "0", "0", fh]]
    lim = min(1.0, 0.6 / np.sqrt(K))
    return ManifoldChart(
        name="product_K", coordinates=coords,
        metric=_parse_matrix(metric, coords),
        complex_structure=_parse_matrix(_canonical_j_entries(4), coords),
        domain_hint=[(-1.0, 1.0), (-1.0, 1.0), (-lim, lim), (-lim, lim)],
        expected={"scalar": 0.0, "kahler": True, "conformally_flat": True})


def _fubini_study(m=2):
    m = int(m)
    if m < 1:
        raise ValueError("complex dimension m must be >= 1")
    dim = 2 * m
    coords = []
    for k in range(m):
        coords += [f"x{k + 1}", f"y{k + 1}"]
    D = "(1 + " + " + ".join(f"x{k + 1}^2 + y{k + 1}^2" for k in range(m)) + ")"

    def a(i, j):
        diag = f"{D}" if i == j else "0"
        return f"({diag} - (x{i + 1}*x{j + 1} + y{i + 1}*y{j + 1}))/{D}^2"

    def b(i, j):
        return f"(y{i + 1}*x{j + 1} - x{i + 1}*y{j + 1})/{D}^2"

    entries = [["0"] * dim for _ in range(dim)]
    for i in range(m):
        for j in range(m):
            entries[2 * i][2 * j] = a(i, j)          # x_i, x_j
            entries[2 * i + 1][2 * j + 1] = a(i, j)  # y_i, y_j
            entries[2 * i][2 * j + 1] = b(i, j)      # x_i, y_j
            entries[2 * i + 1][2 * j] = b(j, i)      # y_i, x_j
    return ManifoldChart(
        name=f"fubini_study_m{m}", coordinates=coords,
        metric=_parse_matrix(entries, coords),
        complex_structure=_parse_matrix(_canonical_j_entries(dim), coords),
        domain_hint=[(-1.0, 1.0)] * dim,
        expected={"hsc": 4.0, "kahler": True, "conformally_flat": m == 1,
                  "antiholomorphic_sectional": 1.0, "constant_type": 1.0})


def _s6_nearly_kahler(r=1.0):
    r = float(r)
    if r <= 0:
        raise ValueError("need radius r > 0")
    coords = [f"u{k + 1}" for k in range(6)]
    rho2 = _rho2(coords)
    den = f"({r * r!r} + {rho2})"
    f = f"{4 * r ** 4!r}/{den}^2"
    metric = [[f if i == j else "0" for j in range(6)] for i in range(6)]
    map_exprs = [f"{2 * r * r!r}*{c}/{den}" for c in coords]
    map_exprs.append(f"{r!r}*(({rho2}) - {r * r!r})/{den}")
    embedding = Embedding(
        ambient_dim=7,
        map_exprs=[ex.parse(s, coords) for s in map_exprs],
        j_rule="octonion_cross", radius=r)
    chart = ManifoldChart(
        name="s6_nearly_kahler", coordinates=coords,
        metric=_parse_matrix(metric, coords),
        domain_hint=[(-1.0, 1.0)] * 6,
        embedding=embedding,
        expected={"sectional": 1.0 / r ** 2, "nk": True, "kahler": False,
                  "constant_type": 1.0 / r ** 2, "conformally_flat": True})
    chart.complex_structure_fn = embedding_j_fn(coords, embedding)
    return chart


def product_chart(chart_a, chart_b, name=None):
    """Riemannian (and, when both factors carry J, Hermitian) product chart.

    Coordinates are renamed with factor prefixes to stay distinct.
    """
    coords = [f"a_{c}" for c in chart_a.coordinates] + \
             [f"b_{c}" for c in chart_b.coordinates]
    na, nb = chart_a.dim, chart_b.dim
    dim = na + nb

    def lift(exprs, prefix, old_coords):
        mapping = {c: ex.Sym(f"{prefix}_{c}") for c in old_coords}
        return [[ex.substitute(e, mapping) for e in row] for row in exprs]

    zero = ex.Const(0.0)
    ga = lift(chart_a.metric, "a", chart_a.coordinates)
    gb = lift(chart_b.metric, "b", chart_b.coordinates)
    metric = [[zero] * dim for _ in range(dim)]
    for i in range(na):
        for j in range(na):
            metric[i][j] = ga[i][j]
    for i in range(nb):
        for j in range(nb):
            metric[na + i][na + j] = gb[i][j]

    jmat = None
    if chart_a.complex_structure is not None and chart_b.complex_structure is not None:
        ja = lift(chart_a.complex_structure, "a", chart_a.coordinates)
        jb = lift(chart_b.complex_structure, "b", chart_b.coordinates)
        jmat = [[zero] * dim for _ in range(dim)]
        for i in range(na):
            for j in range(na):
                jmat[i][j] = ja[i][j]
        for i in range(nb):
            for j in range(nb):
                jmat[na + i][na + j] = jb[i][j]

    hint = None
    if chart_a.domain_hint and chart_b.domain_hint:
        hint = list(chart_a.domain_hint) + list(chart_b.domain_hint)
    return ManifoldChart(
        name=name or f"{chart_a.name}_x_{chart_b.name}",
        coordinates=coords, metric=metric, complex_structure=jmat,
        domain_hint=hint)


_BUILDERS = {
    "flat_kahler": (_flat_kahler, {"m": 2},
                    "Flat chart on C^m with the canonical complex structure"),
    "round_sphere": (_round_sphere, {"n": 4, "r": 1.0},
                     "Round n-sphere of radius r, stereographic chart"),
    "hyperbolic": (_hyperbolic, {"n": 2, "K": 1.0},
                   "Poincare ball of curvature -K"),
    "product_K": (_product_K, {"K": 1.0},
                  "Product of 2-dim space forms of curvature K and -K"),
    "fubini_study": (_fubini_study, {"m": 2},
                     "Complex projective space, potential-normalized (HSC 4)"),
    "s6_nearly_kahler": (_s6_nearly_kahler, {"r": 1.0},
                         "Round 6-sphere with the cross-product almost complex structure"),
}


def list_models():
    """Stable-order descriptors of the built-in models."""
    return [ModelDescriptor(name=name, description=desc, defaults=dict(defaults))
            for name, (_, defaults, desc) in _BUILDERS.items()]


def instantiate(name, **params):
    if name not in _BUILDERS:
        raise UnknownModelError(name)
    builder, defaults, _ = _BUILDERS[name]
    args = dict(defaults)
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValueError(f"unknown parameters for {name}: {sorted(unknown)}")
    args.update(params)
    return builder(**args)
