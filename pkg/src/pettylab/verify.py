"""Self-contained oracle suite for the geometry kernel.

Every check recomputes its expected value with an independent method
(gift wrapping, brute-force support maxima, determinant simplex volumes,
midpoint cubature) and compares against the kernel routines.  The test
suite imports these oracles; the command line runs the whole list.
"""

from __future__ import annotations

import math

import numpy as np

from .bodies import (
    VPolytope,
    Zonotope,
    cube_body,
    hull,
    minkowski_sum,
    polar,
    reduced_form,
    solid_simplex,
    support,
    vertex_set_distance,
    volume,
    zonotope_to_vpolytope,
    zonotope_volume,
)
from .mixed import mixed_volume_fit_check
from .projections import centroid_body_support, projection_body

# ---------------------------------------------------------------------------
# independent oracles


def gift_wrap_2d(points: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Extreme points of a planar set, counterclockwise, by gift wrapping."""
    pts = np.asarray(points, dtype=float)
    m = len(pts)
    start = int(np.lexsort((pts[:, 1], pts[:, 0]))[0])
    order = [start]
    cur = start
    while True:
        nxt = (cur + 1) % m
        for j in range(m):
            if j == cur:
                continue
            a = pts[nxt] - pts[cur]
            b = pts[j] - pts[cur]
            c = a[0] * b[1] - a[1] * b[0]
            if c < -tol or (abs(c) <= tol and b @ b > a @ a):
                nxt = j
        if nxt == start:
            break
        order.append(nxt)
        cur = nxt
    return pts[order]


def brute_hull_vertices_3d(points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Hull vertices of a full-dimensional spatial set by facet enumeration."""
    pts = np.asarray(points, dtype=float)
    m = len(pts)
    keep = np.zeros(m, dtype=bool)
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                nrm = np.cross(pts[j] - pts[i], pts[k] - pts[i])
                scale = np.linalg.norm(nrm)
                if scale < tol:
                    continue
                s = (pts - pts[i]) @ (nrm / scale)
                if np.all(s <= tol) or np.all(s >= -tol):
                    keep |= np.abs(s) <= tol
    return pts[keep]


def shoelace_area(cycle: np.ndarray) -> float:
    x, y = cycle[:, 0], cycle[:, 1]
    return 0.5 * abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))


def support_brute(points: np.ndarray, u: np.ndarray) -> float:
    return float(np.max(np.asarray(points) @ np.asarray(u)))


def simplex_volume_det(points: np.ndarray) -> float:
    pts = np.asarray(points, dtype=float)
    n = pts.shape[1]
    return abs(float(np.linalg.det(pts[1:] - pts[0]))) / math.factorial(n)


def point_in_polygon(cycle: np.ndarray, p: np.ndarray) -> bool:
    """Ray casting against a counterclockwise vertex cycle."""
    inside = False
    m = len(cycle)
    for i in range(m):
        a, b = cycle[i], cycle[(i + 1) % m]
        if (a[1] > p[1]) != (b[1] > p[1]):
            t = (p[1] - a[1]) / (b[1] - a[1])
            if p[0] < a[0] + t * (b[0] - a[0]):
                inside = not inside
    return inside


def centroid_support_cubature(cycle: np.ndarray, u: np.ndarray, grid: int = 400):
    """Midpoint-grid estimate of mean |<x, u>| over the polygon interior."""
    lo = cycle.min(axis=0)
    hi = cycle.max(axis=0)
    xs = lo[0] + (np.arange(grid) + 0.5) * (hi[0] - lo[0]) / grid
    ys = lo[1] + (np.arange(grid) + 0.5) * (hi[1] - lo[1]) / grid
    total = 0.0
    count = 0
    for x in xs:
        for y in ys:
            if point_in_polygon(cycle, np.array([x, y])):
                total += abs(x * u[0] + y * u[1])
                count += 1
    return total / count


def shadow_oracle(K: VPolytope, u: np.ndarray) -> float:
    """Projection volume by flattening the vertex set along u."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    if K.dim == 2:
        r = np.array([-u[1], u[0]])
        vals = K.vertices @ r
        return float(vals.max() - vals.min())
    axis = int(np.argmin(np.abs(u)))
    e = np.zeros(3)
    e[axis] = 1.0
    w1 = np.cross(u, e)
    w1 /= np.linalg.norm(w1)
    w2 = np.cross(u, w1)
    flat = K.vertices @ np.column_stack([w1, w2])
    return shoelace_area(gift_wrap_2d(flat))


# ---------------------------------------------------------------------------
# checks


def _centered_hull(gen: np.random.Generator, n: int, m: int) -> VPolytope:
    from .mixed import centroid

    K = reduced_form(hull(gen.normal(size=(m, n))))
    return VPolytope(K.vertices - centroid(K), reduced=True)


def check_hull_oracle(seed: int = 0):
    gen = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(40):
        pts = gen.normal(size=(gen.integers(4, 30), 2))
        worst = max(worst, vertex_set_distance(hull(pts).vertices, gift_wrap_2d(pts)))
    for _ in range(20):
        pts = gen.normal(size=(gen.integers(5, 11), 3))
        worst = max(
            worst,
            vertex_set_distance(
                reduced_form(hull(pts)).vertices, brute_hull_vertices_3d(pts)
            ),
        )
    return worst <= 1e-9, f"max vertex-set distance {worst:.2e}"


def check_support_oracle(seed: int = 0):
    gen = np.random.default_rng(seed)
    worst = 0.0
    for n in (2, 3):
        for _ in range(25):
            A = gen.normal(size=(gen.integers(n + 2, 12), n))
            B = gen.normal(size=(gen.integers(n + 2, 12), n))
            u = gen.normal(size=n)
            KA, KB = hull(A), hull(B)
            worst = max(worst, abs(support(KA, u) - support_brute(A, u)))
            lhs = support(minkowski_sum(KA, KB), u)
            worst = max(worst, abs(lhs - support_brute(A, u) - support_brute(B, u)))
    return worst <= 1e-9, f"max support defect {worst:.2e}"


def check_simplex_volume(seed: int = 0):
    gen = np.random.default_rng(seed)
    worst = 0.0
    for n in (2, 3):
        for _ in range(25):
            pts = gen.normal(size=(n + 1, n))
            v = volume(hull(pts))
            worst = max(worst, abs(v - simplex_volume_det(pts)))
    return worst <= 1e-9, f"max simplex volume defect {worst:.2e}"


def check_zonotope_volume(seed: int = 0):
    gen = np.random.default_rng(seed)
    worst = 0.0
    for n in (2, 3):
        for m in range(n, 9):
            for _ in range(10):
                Z = Zonotope(gen.normal(size=(m, n)))
                det_vol = zonotope_volume(Z)
                hull_vol = volume(zonotope_to_vpolytope(Z))
                worst = max(worst, abs(det_vol - hull_vol) / max(det_vol, 1.0))
    return worst <= 1e-9, f"max relative defect {worst:.2e}"


def check_polar_involution(seed: int = 0):
    gen = np.random.default_rng(seed)
    worst = 0.0
    for i in range(100):
        n = 2 if i % 2 == 0 else 3
        K = _centered_hull(gen, n, int(gen.integers(n + 2, 16)))
        KK = polar(polar(K))
        worst = max(worst, vertex_set_distance(K.vertices, KK.vertices))
    return worst <= 1e-8, f"max involution distance {worst:.2e}"


def check_mixed_volume_fit(seed: int = 0):
    gen = np.random.default_rng(seed)
    worst = 0.0
    for n in (2, 3):
        for _ in range(6):
            K1 = hull(gen.normal(size=(n + 4, n)))
            K2 = hull(gen.normal(size=(n + 4, n)))
            worst = max(worst, mixed_volume_fit_check(K1, K2))
    worst = max(
        worst, mixed_volume_fit_check(cube_body(2), solid_simplex(2)),
        mixed_volume_fit_check(cube_body(3), solid_simplex(3)),
    )
    return worst <= 1e-7, f"max polarization fit defect {worst:.2e}"


def check_projection_of_cube():
    worst = 0.0
    for n in (2, 3):
        Z = projection_body(cube_body(n))
        P = zonotope_to_vpolytope(Z)
        target = cube_body(n, 2.0 ** (n - 1))
        worst = max(worst, vertex_set_distance(P.vertices, target.vertices))
    return worst == 0.0, f"vertex distance {worst:.2e}"


def check_shadow_oracle(seed: int = 0):
    gen = np.random.default_rng(seed)
    worst = 0.0
    for n in (2, 3):
        for _ in range(10):
            K = reduced_form(hull(gen.normal(size=(n + 5, n))))
            Z = projection_body(K)
            for _ in range(5):
                u = gen.normal(size=n)
                u /= np.linalg.norm(u)
                worst = max(worst, abs(support(Z, u) - shadow_oracle(K, u)))
    return worst <= 1e-9, f"max shadow defect {worst:.2e}"


def check_centroid_support_cubature():
    square = cube_body(2)
    h = centroid_body_support(square)
    u = np.array([1.0, 0.0])
    exact = h(u[None, :])[0]
    est = centroid_support_cubature(square.vertices, u)
    defect = max(abs(exact - 0.5), abs(est - 0.5))
    tri = hull(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    ht = centroid_body_support(tri)
    for v in (np.array([1.0, 0.0]), np.array([0.6, -0.8])):
        defect = max(
            defect,
            abs(ht(v[None, :])[0] - centroid_support_cubature(tri.vertices, v)),
        )
    return defect <= 5e-3, f"max cubature defect {defect:.2e}"


CHECKS = [
    ("hull vs gift wrapping", check_hull_oracle),
    ("support vs brute maxima", check_support_oracle),
    ("simplex volume vs determinant", check_simplex_volume),
    ("zonotope volume det vs hull", check_zonotope_volume),
    ("polar involution", check_polar_involution),
    ("mixed volume polarization fit", check_mixed_volume_fit),
    ("projection body of the cube", check_projection_of_cube),
    ("projection support vs shadow hull", check_shadow_oracle),
    ("centroid body support vs cubature", check_centroid_support_cubature),
]


def run_all(emit=print) -> bool:
    ok_all = True
    for name, fn in CHECKS:
        ok, detail = fn()
        ok_all &= ok
        emit(f"{'ok  ' if ok else 'FAIL'} {name}: {detail}")
    return ok_all
