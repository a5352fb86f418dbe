"""Facet data, mixed volumes by polarization, and segment specializations.

The n-body mixed volume is computed from the inclusion-exclusion identity
over Minkowski sums of subsets, so every value traces back to plain hull
volumes.  Segment arguments additionally admit exact width and projection
formulas which the support evaluators downstream rely on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bodies import (
    GeometryError,
    VPolytope,
    Zonotope,
    facet_planes,
    hull,
    minkowski_sum,
    reduced_form,
    segment,
    volume,
    volume_of_points,
)

FACET_MERGE_DECIMALS = 9


@dataclass(frozen=True)
class FacetData:
    """Per-facet outward unit normals, surface measures, and support offsets."""

    normals: np.ndarray
    measures: np.ndarray
    offsets: np.ndarray

    def __len__(self):
        return len(self.measures)


def _simplex_facet_measure(verts: np.ndarray) -> float:
    if verts.shape[1] == 2:
        return float(np.linalg.norm(verts[1] - verts[0]))
    return 0.5 * float(np.linalg.norm(np.cross(verts[1] - verts[0], verts[2] - verts[0])))


def facets(P: VPolytope) -> FacetData:
    """Merged facet data of a full-dimensional body in dimension 2 or 3."""
    R = reduced_form(P)
    got = R._cache.get("facets")
    if got is not None:
        return got
    normals, offsets, h = facet_planes(R)
    scale = max(1.0, float(np.max(np.abs(R.vertices))))
    keys = np.round(
        np.column_stack([normals, offsets / scale]), FACET_MERGE_DECIMALS
    )
    groups: dict = {}
    for i, key in enumerate(map(tuple, keys)):
        groups.setdefault(key, []).append(i)
    out_n, out_m, out_o = [], [], []
    for idx in groups.values():
        area = sum(_simplex_facet_measure(R.vertices[h.simplices[i]]) for i in idx)
        out_n.append(normals[idx[0]])
        out_m.append(area)
        out_o.append(offsets[idx[0]])
    data = FacetData(np.array(out_n), np.array(out_m), np.array(out_o))
    R._cache["facets"] = data
    return data


def surface_area(P: VPolytope) -> float:
    return float(np.sum(facets(P).measures))


def projection_support(P: VPolytope, U) -> np.ndarray:
    """(n-1)-volume of the shadow of P orthogonal to each row of U.

    Cauchy's formula: half the surface measure weighted by |<normal, u>|.
    Rows of U need not be unit; values scale 1-homogeneously.
    """
    f = facets(P)
    U = np.atleast_2d(np.asarray(U, dtype=float))
    return 0.5 * np.sum(np.abs(U @ f.normals.T) * f.measures[None, :], axis=1)


def centroid(P: VPolytope) -> np.ndarray:
    """Volume centroid of a full-dimensional body."""
    R = reduced_form(P)
    if R.affine_dim < R.dim:
        raise GeometryError("centroid needs a full-dimensional body")
    _, _, h = facet_planes(R)
    ref = R.vertices.mean(axis=0)
    total = 0.0
    acc = np.zeros(R.dim)
    n = R.dim
    for simplex in h.simplices:
        pts = R.vertices[simplex]
        vol = abs(np.linalg.det(pts - ref)) / math.factorial(n)
        acc += vol * (pts.sum(axis=0) + ref) / (n + 1)
        total += vol
    return acc / total


def clip_halfspace(P: VPolytope, normal, offset: float = 0.0) -> np.ndarray:
    """Vertices of P intersected with {x : <normal, x> >= offset}.

    Returns a possibly empty point array; callers hull it as needed.
    """
    R = reduced_form(P)
    u = np.asarray(normal, dtype=float)
    vals = R.vertices @ u - offset
    scale = max(1.0, float(np.max(np.abs(vals))))
    tol = 1e-13 * scale
    kept = R.vertices[vals >= -tol]
    if R.affine_dim == R.dim:
        _, _, h = facet_planes(R)
        edges = set()
        for simplex in h.simplices:
            k = len(simplex)
            for a in range(k):
                for b in range(a + 1, k):
                    edges.add((min(simplex[a], simplex[b]), max(simplex[a], simplex[b])))
    else:
        k = len(R.vertices)
        edges = {(a, b) for a in range(k) for b in range(a + 1, k)}
    crossings = []
    for a, b in edges:
        va, vb = vals[a], vals[b]
        if (va > tol and vb < -tol) or (va < -tol and vb > tol):
            t = va / (va - vb)
            crossings.append(R.vertices[a] + t * (R.vertices[b] - R.vertices[a]))
    if crossings:
        kept = np.vstack([kept, np.array(crossings)])
    return kept


# ---------------------------------------------------------------------------
# mixed volumes


def _as_polytope(B) -> VPolytope:
    if isinstance(B, Zonotope):
        from .bodies import zonotope_to_vpolytope

        return zonotope_to_vpolytope(B)
    return B


def mixed_volume(bodies: list) -> float:
    """V(K_1, ..., K_n) by inclusion-exclusion over subset Minkowski sums."""
    bodies = [_as_polytope(B) for B in bodies]
    n = bodies[0].dim
    if len(bodies) != n:
        raise GeometryError(f"mixed volume in dimension {n} needs exactly {n} bodies")
    if any(B.dim != n for B in bodies):
        raise GeometryError("mixed volume bodies must share a dimension")
    sums: dict[frozenset, VPolytope] = {}
    order = sorted(range(n))
    for size in range(1, n + 1):
        for subset in itertools.combinations(order, size):
            key = frozenset(subset)
            if size == 1:
                sums[key] = reduced_form(bodies[subset[0]])
            else:
                prev = frozenset(subset[:-1])
                sums[key] = minkowski_sum(sums[prev], bodies[subset[-1]])
    total = 0.0
    for key, body in sums.items():
        total += ((-1.0) ** (n - len(key))) * volume(body)
    return total / math.factorial(n)


def mixed_volume_with_segment(bodies: list, y) -> float:
    """V(K_1, ..., K_{n-1}, [0, y]); fast widths in the plane, polarization in space."""
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if len(bodies) != n - 1:
        raise GeometryError("need n-1 bodies alongside the segment")
    if n == 2:
        K = bodies[0]
        perp = np.array([-y[1], y[0]])
        return 0.5 * (K.support(perp) + K.support(-perp))
    return mixed_volume(list(bodies) + [segment(np.zeros(n), y)])


def v1(K: VPolytope, L) -> float:
    """Mixed volume with K repeated n-1 times and L once.

    Zonotope L expands over generators: each centered segment contributes
    (2/n) h_{Pi K}(g).  In the plane the width form is used so degenerate
    hulls remain legal.
    """
    n = K.dim
    if isinstance(L, Zonotope):
        if L.dim != n:
            raise GeometryError("dimension mismatch in v1")
        gens = L.generators
        if len(gens) == 0:
            return 0.0
        if n == 2:
            perp = np.column_stack([-gens[:, 1], gens[:, 0]])
            widths = K.support_batch(perp) + K.support_batch(-perp)
            return float(np.sum(widths))
        vals = projection_support(K, gens)
        return float((2.0 / n) * np.sum(vals))
    return mixed_volume([K] * (n - 1) + [L])


def shadow_convexity_probe(systems: list, t: float) -> float:
    """Mixed volume of n shadow systems evaluated at a common parameter."""
    bodies = []
    for s in systems:
        pts = np.asarray(s.base_points, dtype=float) + float(t) * np.outer(
            np.asarray(s.speeds, dtype=float), np.asarray(s.direction, dtype=float)
        )
        bodies.append(hull(pts))
    return mixed_volume(bodies)


def mixed_volume_fit_check(K1: VPolytope, K2: VPolytope, lams=(0.25, 0.5, 1.0, 2.0)) -> float:
    """Max relative defect of |a K1 + b K2| against its polynomial expansion."""
    n = K1.dim
    worst = 0.0
    coeffs = []
    for j in range(n + 1):
        args = [K1] * (n - j) + [K2] * j
        coeffs.append(math.comb(n, j) * mixed_volume(args))
    for a in lams:
        for b in lams:
            pts_a = reduced_form(K1).vertices * a
            pts_b = reduced_form(K2).vertices * b
            s = (pts_a[:, None, :] + pts_b[None, :, :]).reshape(-1, n)
            direct = volume_of_points(s)
            predicted = sum(
                c * (a ** (n - j)) * (b ** j) for j, c in enumerate(coeffs)
            )
            worst = max(worst, abs(direct - predicted) / max(abs(direct), 1e-300))
    return worst
