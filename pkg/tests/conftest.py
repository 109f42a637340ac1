import numpy as np
import pytest

from hermgeo import curvature as cv
from hermgeo import expressions as ex


def chart_from_strings(name, coords, entries, j_entries=None, hint=None):
    metric = [[ex.parse(entries[i][j], coords) for j in range(len(coords))]
              for i in range(len(coords))]
    jmat = None
    if j_entries is not None:
        jmat = [[ex.parse(j_entries[i][j], coords) for j in range(len(coords))]
                for i in range(len(coords))]
    return cv.ManifoldChart(name=name, coordinates=coords, metric=metric,
                            complex_structure=jmat, domain_hint=hint)


def flat_chart(n, name=None):
    coords = [f"x{i + 1}" for i in range(n)]
    entries = [["1" if i == j else "0" for j in range(n)] for i in range(n)]
    return chart_from_strings(name or f"flat{n}", coords, entries)


def two_sphere_polar():
    return chart_from_strings("s2_polar", ["t", "p"], [["1", "0"], ["0", "sin(t)^2"]])


def random_polynomial_metric(rng, dim, scale=0.08):
    """Symmetric perturbation of the flat metric, SPD near the origin."""
    coords = [f"x{i + 1}" for i in range(dim)]
    entries = [["0"] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            terms = []
            for _ in range(3):
                c = rng.uniform(-scale, scale)
                a, b = rng.integers(0, dim, size=2)
                terms.append(f"{c!r}*{coords[a]}*{coords[b]}")
            poly = " + ".join(terms)
            if i == j:
                entries[i][j] = f"1 + {poly}"
            else:
                entries[i][j] = poly
                entries[j][i] = poly
    return chart_from_strings("random_poly", coords, entries)


def random_low_degree_poly(rng, coords, scale=0.1):
    terms = [f"{rng.uniform(-scale, scale)!r}*{c}" for c in coords]
    a, b = rng.integers(0, len(coords), size=2)
    terms.append(f"{rng.uniform(-scale, scale)!r}*{coords[a]}*{coords[b]}")
    return ex.parse(" + ".join(terms), coords)


def conformal_rescale(chart, phi):
    """Chart with metric e^(2 phi) g."""
    factor = ex.call("exp", ex.mul(ex.Const(2.0), phi))
    metric = [[ex.mul(factor, e) for e in row] for row in chart.metric]
    return cv.ManifoldChart(name=chart.name + "_conformal",
                            coordinates=list(chart.coordinates), metric=metric)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
