"""Vertex-presented convex bodies and the exact operations on them.

Everything downstream (mixed volumes, projection bodies, the experiment
harness) reduces to a small kernel of operations on two representations:
``VPolytope`` (convex hull of finitely many points) and ``Zonotope``
(Minkowski sum of centered segments).  Exact hull-based algorithms are
restricted to ambient dimension 2 and 3; zonotope determinant volumes and
plain vertex arithmetic work in any dimension.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

COPLANAR_TOL = 1e-12
INTERIOR_TOL = 1e-12
ZONOTOPE_DET_BUDGET = 10 ** 6
ZONOTOPE_VERTEX_GEN_LIMIT = 20

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


class GeometryError(ValueError):
    """Raised when an operation's preconditions are not met."""


def as_points(points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.ndim != 2:
        raise GeometryError("points must form a 2-d array")
    return pts


class VPolytope:
    """Convex polytope given by a vertex list.

    ``reduced=True`` promises the vertex list is irredundant and, in the
    plane, ordered counterclockwise.  Constructors that cannot promise that
    leave the flag off; volume and facet queries reduce lazily.
    """

    __slots__ = ("vertices", "dim", "reduced", "_cache")

    def __init__(self, vertices, reduced: bool = False):
        pts = as_points(vertices)
        pts.setflags(write=False)
        self.vertices = pts
        self.dim = pts.shape[1]
        self.reduced = bool(reduced)
        self._cache: dict = {}

    def __repr__(self):
        return f"VPolytope(dim={self.dim}, vertices={len(self.vertices)}, reduced={self.reduced})"

    def __getstate__(self):
        return (np.asarray(self.vertices), self.dim, self.reduced)

    def __setstate__(self, state):
        pts, dim, reduced = state
        pts = np.asarray(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "vertices", pts)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "reduced", reduced)
        object.__setattr__(self, "_cache", {})

    @property
    def affine_dim(self) -> int:
        """Dimension of the affine hull; flags degenerate bodies."""
        got = self._cache.get("affine_dim")
        if got is None:
            got = affine_dimension(self.vertices)
            self._cache["affine_dim"] = got
        return got

    def is_degenerate(self) -> bool:
        return self.affine_dim < self.dim

    def support(self, u) -> float:
        return float(np.max(self.vertices @ np.asarray(u, dtype=float)))

    def support_batch(self, U) -> np.ndarray:
        """Support values for a stack of directions, shape (k, dim)."""
        return np.max(np.asarray(U, dtype=float) @ self.vertices.T, axis=1)


@dataclass(frozen=True)
class Zonotope:
    """Minkowski sum of segments [-g, g] over the generator rows."""

    generators: np.ndarray

    def __post_init__(self):
        gens = as_points(self.generators)
        gens.setflags(write=False)
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    def support(self, u) -> float:
        return float(np.sum(np.abs(self.generators @ np.asarray(u, dtype=float))))

    def support_batch(self, U) -> np.ndarray:
        return np.sum(np.abs(np.asarray(U, dtype=float) @ self.generators.T), axis=1)


def affine_dimension(points: np.ndarray, tol: float = COPLANAR_TOL) -> int:
    pts = as_points(points)
    if len(pts) <= 1:
        return 0
    centered = pts - pts.mean(axis=0)
    scale = np.max(np.abs(centered))
    if scale == 0.0:
        return 0
    sv = np.linalg.svd(centered / scale, compute_uv=False)
    return int(np.sum(sv > tol * max(1.0, sv[0])))


def _affine_basis(points: np.ndarray, rank: int):
    center = points.mean(axis=0)
    centered = points - center
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    basis = vt[:rank]
    return center, basis


def _hull_full_dim(points: np.ndarray) -> np.ndarray:
    try:
        h = ConvexHull(points)
    except QhullError:
        h = ConvexHull(points, qhull_options="QJ")
    return points[h.vertices]


def hull(points) -> VPolytope:
    """Irredundant convex hull of a point cloud in dimension 2 or 3.

    Degenerate clouds are legal: the result keeps the ambient dimension and
    reports a smaller ``affine_dim``.  Planar hulls come back in
    counterclockwise order.
    """
    pts = np.unique(as_points(points), axis=0)
    n = pts.shape[1]
    if n not in (2, 3):
        raise GeometryError(f"hull supports dimension 2 or 3, got {n}")
    rank = affine_dimension(pts)
    if rank == n:
        verts = _hull_full_dim(pts)
        out = VPolytope(verts, reduced=True)
        out._cache["affine_dim"] = rank
        return out
    if rank == 0:
        out = VPolytope(pts[:1], reduced=True)
        out._cache["affine_dim"] = 0
        return out
    center, basis = _affine_basis(pts, rank)
    coords = (pts - center) @ basis.T
    if rank == 1:
        lo, hi = np.argmin(coords[:, 0]), np.argmax(coords[:, 0])
        verts = pts[[lo, hi]]
    else:
        sub = _hull_full_dim(coords)
        verts = sub @ basis + center
    out = VPolytope(verts, reduced=True)
    out._cache["affine_dim"] = rank
    return out


def reduced_form(P: VPolytope) -> VPolytope:
    """Hull the vertex list unless it is already irredundant and ordered."""
    if P.reduced:
        return P
    got = P._cache.get("reduced")
    if got is None:
        got = hull(P.vertices)
        P._cache["reduced"] = got
    return got


def _polygon_area(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def volume(P) -> float:
    """Euclidean volume (area in the plane); degenerate bodies give 0."""
    if isinstance(P, Zonotope):
        return zonotope_volume(P)
    R = reduced_form(P)
    got = R._cache.get("volume")
    if got is not None:
        return got
    if R.affine_dim < R.dim:
        val = 0.0
    elif R.dim == 2:
        val = abs(_polygon_area(R.vertices))
    else:
        val = float(ConvexHull(R.vertices).volume)
    R._cache["volume"] = val
    if R is not P:
        P._cache["volume"] = val
    return val


def volume_of_points(points: np.ndarray) -> float:
    """Volume of the hull of a point cloud, with a fast simplex path."""
    pts = as_points(points)
    n = pts.shape[1]
    if len(pts) <= n:
        return 0.0
    if len(pts) == n + 1:
        return abs(np.linalg.det(pts[1:] - pts[0])) / math.factorial(n)
    try:
        return float(ConvexHull(pts).volume)
    except QhullError:
        if affine_dimension(pts) < n:
            return 0.0
        return float(ConvexHull(pts, qhull_options="QJ").volume)


def support(body, u) -> float:
    return body.support(u)


def minkowski_sum(A: VPolytope, B: VPolytope) -> VPolytope:
    if A.dim != B.dim:
        raise GeometryError("dimension mismatch in minkowski_sum")
    pts = (A.vertices[:, None, :] + B.vertices[None, :, :]).reshape(-1, A.dim)
    return hull(pts)


def linear_image(X, C) -> VPolytope:
    """Image X C of a body under a linear map into dimension 2 or 3."""
    X = np.asarray(X, dtype=float)
    if isinstance(C, Zonotope):
        return zonotope_to_vpolytope(Zonotope(C.generators @ X.T))
    return hull(C.vertices @ X.T)


def scale(P: VPolytope, c: float) -> VPolytope:
    return VPolytope(P.vertices * c, reduced=P.reduced if c > 0 else False)


def translate(P: VPolytope, t) -> VPolytope:
    return VPolytope(P.vertices + np.asarray(t, dtype=float), reduced=P.reduced)


def segment(a, b) -> VPolytope:
    return VPolytope(np.vstack([np.asarray(a, dtype=float), np.asarray(b, dtype=float)]))


def facet_planes(P: VPolytope):
    """Outward unit normals and offsets (h values) of a full-dimensional body."""
    R = reduced_form(P)
    got = R._cache.get("planes")
    if got is not None:
        return got
    if R.affine_dim < R.dim:
        raise GeometryError("facet planes need a full-dimensional body")
    h = ConvexHull(R.vertices)
    # qhull convention: normal . x + offset <= 0
    normals = h.equations[:, :-1]
    offsets = -h.equations[:, -1]
    got = (normals, offsets, h)
    R._cache["planes"] = got
    if R is not P:
        P._cache["planes"] = got
    return got


def polar(P: VPolytope, tol: float = INTERIOR_TOL) -> VPolytope:
    """Polar body {x : <x, y> <= 1 for all y in P}; origin must be interior."""
    R = reduced_form(P)
    if R.affine_dim < R.dim:
        raise GeometryError("polar needs a full-dimensional body")
    normals, offsets, _ = facet_planes(R)
    scale_ref = max(1.0, float(np.max(np.abs(R.vertices))))
    if np.min(offsets) <= tol * scale_ref:
        raise GeometryError("polar requires the origin strictly interior")
    pts = normals / offsets[:, None]
    return hull(pts)


def vertex_set_distance(P, Q) -> float:
    """Symmetric max-min distance between the two irredundant vertex sets.

    Accepts polytopes or raw vertex arrays (arrays are taken as already
    irredundant, e.g. an oracle's output).
    """
    a = P if isinstance(P, np.ndarray) else reduced_form(P).vertices
    b = Q if isinstance(Q, np.ndarray) else reduced_form(Q).vertices
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def hausdorff_to_centered_ball(P: VPolytope, radius: float, samples: int = 2048) -> float:
    """Hausdorff distance between P and the centered ball of given radius.

    Uses sup |h_P - radius| over facet normals, vertex directions, and a
    quasi-uniform direction sample; adequate for convergence reporting.
    """
    R = reduced_form(P)
    dirs = [sphere_directions(R.dim, samples)]
    vn = np.linalg.norm(R.vertices, axis=1)
    keep = vn > 1e-14
    if np.any(keep):
        dirs.append(R.vertices[keep] / vn[keep, None])
    if R.affine_dim == R.dim:
        normals, _, _ = facet_planes(R)
        dirs.append(normals)
    U = np.vstack(dirs)
    return float(np.max(np.abs(R.support_batch(U) - radius)))


def sphere_directions(n: int, count: int) -> np.ndarray:
    """Deterministic quasi-uniform unit directions (angle grid / Fibonacci)."""
    if n == 2:
        theta = (np.arange(count) + 0.5) * (2.0 * math.pi / count)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if n == 3:
        i = np.arange(count)
        z = 1.0 - (2.0 * i + 1.0) / count
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        phi = i * GOLDEN_ANGLE
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    raise GeometryError(f"directions need dimension 2 or 3, got {n}")


# ---------------------------------------------------------------------------
# zonotopes


def merge_parallel_generators(Z: Zonotope, tol: float = 1e-12) -> Zonotope:
    """Combine generators spanning the same line; support is unchanged."""
    gens = Z.generators
    norms = np.linalg.norm(gens, axis=1)
    keep = norms > tol
    gens, norms = gens[keep], norms[keep]
    if len(gens) == 0:
        return Zonotope(np.zeros((0, Z.dim)))
    units = gens / norms[:, None]
    # canonical orientation: first nonzero coordinate positive
    for i, u in enumerate(units):
        j = np.argmax(np.abs(u) > tol)
        if u[j] < 0:
            units[i] = -u
    order = np.lexsort(units.T[::-1])
    merged = []
    current = units[order[0]] * norms[order[0]]
    current_u = units[order[0]]
    for idx in order[1:]:
        if np.linalg.norm(units[idx] - current_u) < 1e-9:
            current = current + units[idx] * norms[idx]
        else:
            merged.append(current)
            current = units[idx] * norms[idx]
            current_u = units[idx]
    merged.append(current)
    return Zonotope(np.array(merged))


def zonotope_volume(Z: Zonotope, budget: int = ZONOTOPE_DET_BUDGET) -> float:
    """Exact volume via the generator determinant expansion, any dimension."""
    gens = Z.generators
    m, n = gens.shape
    if m < n:
        return 0.0
    count = math.comb(m, n)
    if count > budget:
        raise GeometryError(
            f"determinant expansion needs {count} terms (budget {budget}); "
            "convert to a vertex polytope and take its hull volume instead"
        )
    idx = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(m), n)),
        dtype=np.intp,
    ).reshape(count, n)
    sub = gens[idx]
    if n == 2:
        dets = sub[:, 0, 0] * sub[:, 1, 1] - sub[:, 0, 1] * sub[:, 1, 0]
    elif n == 3:
        dets = np.einsum("ki,ki->k", np.cross(sub[:, 0], sub[:, 1]), sub[:, 2])
    else:
        dets = np.linalg.det(sub)
    return float((2.0 ** n) * np.sum(np.abs(dets)))


def _zonotope_polygon_vertices(gens: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(gens, axis=1)
    gens = gens[norms > 1e-14]
    if len(gens) == 0:
        return np.zeros((1, 2))
    flip = (gens[:, 1] < 0) | ((gens[:, 1] == 0) & (gens[:, 0] < 0))
    gens = np.where(flip[:, None], -gens, gens)
    angles = np.arctan2(gens[:, 1], gens[:, 0])
    gens = gens[np.argsort(angles, kind="stable")]
    start = -np.sum(gens, axis=0)
    chain = np.vstack([start, start + 2.0 * np.cumsum(gens, axis=0)])
    verts = np.vstack([chain[:-1], -chain[:-1]])
    return verts


def zonotope_to_vpolytope(Z: Zonotope) -> VPolytope:
    """Exact vertex form: sorted edge walk in 2-D, sign-pattern hull in 3-D."""
    Zm = merge_parallel_generators(Z)
    gens = Zm.generators
    n = Zm.dim
    if n == 2:
        return hull(_zonotope_polygon_vertices(gens))
    if n != 3:
        raise GeometryError("vertex conversion supports dimension 2 or 3")
    m = len(gens)
    if m == 0:
        return VPolytope(np.zeros((1, 3)), reduced=True)
    if m > ZONOTOPE_VERTEX_GEN_LIMIT:
        raise GeometryError(
            f"{m} generators exceed the sign-pattern limit {ZONOTOPE_VERTEX_GEN_LIMIT}"
        )
    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=m)))
    return hull(signs @ gens)


def polar_of_zonotope(Z: Zonotope, tol: float = 1e-14) -> VPolytope:
    """Exact polar of a full-dimensional zonotope via facet normal enumeration."""
    Zm = merge_parallel_generators(Z)
    gens = Zm.generators
    n = Zm.dim
    if n == 2:
        cand = np.column_stack([-gens[:, 1], gens[:, 0]])
    elif n == 3:
        i, j = np.triu_indices(len(gens), k=1)
        cand = np.cross(gens[i], gens[j])
    else:
        raise GeometryError("polar supports dimension 2 or 3")
    norms = np.linalg.norm(cand, axis=1)
    cand = cand[norms > tol] / norms[norms > tol, None]
    if len(cand) == 0 or np.linalg.matrix_rank(gens) < n:
        raise GeometryError("polar requires a full-dimensional zonotope")
    h = np.sum(np.abs(cand @ gens.T), axis=1)
    pts = cand / h[:, None]
    return hull(np.vstack([pts, -pts]))


# ---------------------------------------------------------------------------
# M-addition


@dataclass(frozen=True)
class MSpec:
    """Combination rule for m_add: plain Minkowski, an explicit 1-unconditional
    polytope M, or the L_p rule realized as M = B_q with 1/p + 1/q = 1."""

    variant: str
    M: VPolytope | None = None
    p: float | None = None
    vertex_budget: int = 256

    @staticmethod
    def minkowski() -> "MSpec":
        return MSpec("minkowski")

    @staticmethod
    def polytope(M: VPolytope) -> "MSpec":
        return MSpec("polytope", M=M)

    @staticmethod
    def lp(p: float, vertex_budget: int | None = None) -> "MSpec":
        if p < 1:
            raise GeometryError("lp addition needs p >= 1")
        if vertex_budget is None:
            vertex_budget = 256
        return MSpec("lp", p=float(p), vertex_budget=vertex_budget)


def is_origin_symmetric(P: VPolytope, tol: float = 1e-9) -> bool:
    R = reduced_form(P)
    return vertex_set_distance(R, VPolytope(-R.vertices)) < tol * max(
        1.0, float(np.max(np.abs(R.vertices)))
    )


def is_unconditional(M: VPolytope, tol: float = 1e-9) -> bool:
    """Vertex set invariant under all coordinate sign flips."""
    R = reduced_form(M)
    for signs in itertools.product((-1.0, 1.0), repeat=R.dim):
        flipped = VPolytope(R.vertices * np.array(signs))
        if vertex_set_distance(R, flipped) > tol * max(1.0, float(np.max(np.abs(R.vertices)))):
            return False
    return True


def lp_ball_vertices(m: int, q: float, budget: int) -> np.ndarray:
    """Vertex sample of the unit B_q ball in R^m (m = 2 or 3); exact at q in {1, inf}."""
    if math.isinf(q):
        return np.array(list(itertools.product((-1.0, 1.0), repeat=m)))
    if q == 1:
        return np.vstack([np.eye(m), -np.eye(m)])
    dirs = sphere_directions(m, budget)
    norms = np.sum(np.abs(dirs) ** q, axis=1) ** (1.0 / q)
    return dirs / norms[:, None]


def m_add(spec: MSpec, bodies: list) -> VPolytope:
    """M-addition of origin-symmetric bodies sharing an ambient dimension."""
    if len(bodies) == 0:
        raise GeometryError("m_add needs at least one body")
    dims = {B.dim for B in bodies}
    if len(dims) != 1:
        raise GeometryError("m_add bodies must share a dimension")
    bodies = [reduced_form(B) for B in bodies]
    if spec.variant == "minkowski":
        out = bodies[0]
        for B in bodies[1:]:
            out = minkowski_sum(out, B)
        return out
    if spec.variant == "lp":
        if spec.p == 1.0:
            q = math.inf
        elif math.isinf(spec.p):
            q = 1.0
        else:
            q = spec.p / (spec.p - 1.0)
        Mverts = lp_ball_vertices(len(bodies), q, spec.vertex_budget)
    else:
        M = spec.M
        if M is None or M.dim != len(bodies):
            raise GeometryError("polytope M must live in R^(number of bodies)")
        if not is_unconditional(M):
            raise GeometryError("polytope M must be 1-unconditional")
        Mverts = reduced_form(M).vertices
    for B in bodies:
        if not is_origin_symmetric(B):
            raise GeometryError("m_add with a nontrivial M needs origin-symmetric bodies")
    pieces = []
    for a in Mverts:
        pts = bodies[0].vertices * a[0]
        for coeff, B in zip(a[1:], bodies[1:]):
            pts = (pts[:, None, :] + coeff * B.vertices[None, :, :]).reshape(-1, pts.shape[1])
            if len(pts) > 4096:
                pts = hull(pts).vertices
        pieces.append(pts)
    return hull(np.vstack(pieces))


# ---------------------------------------------------------------------------
# standard bodies and literals


def cube_body(n: int, half: float = 1.0) -> VPolytope:
    if n == 2:
        v = half * np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
        return VPolytope(v, reduced=True)
    if n > 16:
        raise GeometryError("explicit cube vertices limited to dimension 16")
    verts = half * np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
    return VPolytope(verts, reduced=(n == 3))


def simplex_body(n: int) -> VPolytope:
    """Standard simplex conv{e_1, ..., e_n} in R^n (affinely (n-1)-dimensional)."""
    return VPolytope(np.eye(n), reduced=False)


def solid_simplex(n: int) -> VPolytope:
    """conv{0, e_1, ..., e_n}, full-dimensional in R^n."""
    return VPolytope(np.vstack([np.zeros(n), np.eye(n)]), reduced=False)


def cross_body(n: int, radius: float = 1.0) -> VPolytope:
    return VPolytope(radius * np.vstack([np.eye(n), -np.eye(n)]), reduced=(n in (2, 3)))


def regular_polygon(radius: float, sides: int) -> VPolytope:
    theta = np.arange(sides) * (2.0 * math.pi / sides)
    v = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    return VPolytope(v, reduced=True)


def ball_body(n: int, radius: float = 1.0, facets: int | None = None) -> VPolytope:
    """Inscribed polytope stand-in for the Euclidean ball.

    Defaults: 64-gon in the plane, 320-facet triangulated sphere in space
    (162 quasi-uniform vertices).
    """
    if n == 2:
        return regular_polygon(radius, facets or 64)
    if n == 3:
        f = facets or 320
        nverts = f // 2 + 2
        return hull(radius * sphere_directions(3, nverts))
    raise GeometryError("ball approximation needs dimension 2 or 3")


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def lp_ball_body(m: int, p: float, budget: int | None = None) -> VPolytope:
    """B_p^m as a vertex polytope; exact for p in {1, inf}, sampled otherwise."""
    if p < 1:
        raise GeometryError("lp ball needs p >= 1")
    if p == 1:
        return cross_body(m)
    if math.isinf(p):
        return cube_body(m)
    if m not in (2, 3):
        raise GeometryError("lp ball sampling supports m = 2 or 3 only")
    budget = budget or (256 if m == 2 else 1024)
    return VPolytope(lp_ball_vertices(m, p, budget), reduced=False)


def body_from_literal(spec: dict):
    """Build a body from its JSON literal form.

    Accepted types: polygon, polytope3, cube, simplex, ball, zonotope.
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise GeometryError("body literal must be an object with a 'type' field")
    kind = spec["type"]
    if kind == "polygon":
        v = as_points(spec["vertices"])
        if v.shape[1] != 2:
            raise GeometryError("polygon vertices must be planar")
        return hull(v)
    if kind == "polytope3":
        v = as_points(spec["vertices"])
        if v.shape[1] != 3:
            raise GeometryError("polytope3 vertices must be 3-d")
        return hull(v)
    if kind == "cube":
        return cube_body(int(spec["dim"]), float(spec.get("half", 1.0)))
    if kind == "simplex":
        return solid_simplex(int(spec["dim"]))
    if kind == "ball":
        return ball_body(
            int(spec["dim"]),
            float(spec.get("radius", 1.0)),
            int(spec["facets"]) if "facets" in spec else None,
        )
    if kind == "zonotope":
        return Zonotope(as_points(spec["generators"]))
    raise GeometryError(f"unknown body literal type {kind!r}")
