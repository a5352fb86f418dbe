"""Seeded random constructions: points, matrices, hulls, and zonotopes.

Randomness flows through counter-based Philox streams addressed by a master
seed plus a stream key, so any trial can be regenerated in isolation and
parallel schedules cannot change the numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay

from .bodies import (
    GeometryError,
    VPolytope,
    Zonotope,
    hull,
    lp_ball_body,
    reduced_form,
    unit_ball_volume,
    volume,
    zonotope_to_vpolytope,
)


@dataclass(frozen=True)
class RngStream:
    """Substream of a master seed; equal (seed, key) gives equal draws."""

    seed: int
    key: tuple = ()

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=tuple(self.key))
        return np.random.Generator(np.random.Philox(ss))

    def child(self, *key) -> "RngStream":
        return RngStream(self.seed, tuple(self.key) + tuple(key))


class Density:
    """Sampling density for matrix columns.

    kind 'uniform' draws from a polytope via volume-weighted simplex picks,
    'ball' draws from the centered Euclidean ball (the exact rearrangement
    of a uniform density), 'gaussian' from an isotropic normal.
    """

    def __init__(self, kind: str, dim: int, body: VPolytope | None = None,
                 radius: float = 1.0, sigma: float = 1.0):
        self.kind = kind
        self.dim = dim
        self.body = body
        self.radius = radius
        self.sigma = sigma
        self._tri = None
        self._tri_weights = None

    def __getstate__(self):
        return (self.kind, self.dim, self.body, self.radius, self.sigma)

    def __setstate__(self, state):
        self.kind, self.dim, self.body, self.radius, self.sigma = state
        self._tri = None
        self._tri_weights = None

    @staticmethod
    def uniform(body: VPolytope) -> "Density":
        R = reduced_form(body)
        if R.affine_dim < R.dim:
            raise GeometryError("uniform density needs a full-dimensional body")
        return Density("uniform", R.dim, body=R)

    @staticmethod
    def ball(dim: int, radius: float) -> "Density":
        return Density("ball", dim, radius=radius)

    @staticmethod
    def gaussian(dim: int, sigma: float = 1.0) -> "Density":
        return Density("gaussian", dim, sigma=sigma)

    @staticmethod
    def from_literal(spec: dict, dim: int) -> "Density":
        kind = spec.get("type")
        if kind == "uniform":
            from .bodies import body_from_literal

            body = body_from_literal(spec["body"])
            if isinstance(body, Zonotope):
                body = zonotope_to_vpolytope(body)
            d = Density.uniform(body)
            if d.dim != dim:
                raise GeometryError(f"density body lives in dimension {d.dim}, expected {dim}")
            if spec.get("rearranged"):
                d = d.rearranged()
            return d
        if kind == "gaussian":
            return Density.gaussian(dim, float(spec.get("sigma", 1.0)))
        raise GeometryError(f"unknown density literal {kind!r}")

    def rearranged(self) -> "Density":
        """Symmetric decreasing rearrangement: uniform goes to the equal-volume
        centered ball, radial densities are already rearranged."""
        if self.kind == "uniform":
            r = (volume(self.body) / unit_ball_volume(self.dim)) ** (1.0 / self.dim)
            return Density.ball(self.dim, r)
        return self

    def comparison_body(self, facets: int | None = None) -> VPolytope:
        """Polytope carrier for exact downstream ops (ball kinds use the
        equal-volume rearrangement polytope)."""
        if self.kind == "uniform":
            return self.body
        if self.kind == "ball":
            vol = unit_ball_volume(self.dim) * self.radius ** self.dim
            return rearrange_body_volume(vol, self.dim, facets)
        raise GeometryError("gaussian density has no body carrier")

    def _triangulation(self):
        if self._tri is None:
            tri = Delaunay(self.body.vertices)
            pts = tri.points[tri.simplices]
            vols = np.abs(np.linalg.det(pts[:, 1:] - pts[:, :1])) / math.factorial(self.dim)
            self._tri = tri
            self._tri_weights = vols / vols.sum()
        return self._tri, self._tri_weights

    def sample(self, gen: np.random.Generator, count: int) -> np.ndarray:
        """Draw count points, shape (count, dim)."""
        n = self.dim
        if self.kind == "gaussian":
            return self.sigma * gen.standard_normal((count, n))
        if self.kind == "ball":
            dirs = gen.standard_normal((count, n))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            radii = self.radius * gen.random(count) ** (1.0 / n)
            return dirs * radii[:, None]
        tri, weights = self._triangulation()
        idx = gen.choice(len(weights), size=count, p=weights)
        bary = gen.dirichlet(np.ones(n + 1), size=count)
        corners = tri.points[tri.simplices[idx]]
        return np.einsum("kj,kjd->kd", bary, corners)


def rearrange_body_volume(vol: float, dim: int, facets: int | None = None) -> VPolytope:
    from .bodies import ball_body

    approx = ball_body(dim, 1.0, facets)
    scale = (vol / volume(approx)) ** (1.0 / dim)
    return VPolytope(approx.vertices * scale, reduced=True)


@dataclass(frozen=True)
class BlockSpec:
    """Column blocks of a random matrix: (density, column count) pairs."""

    blocks: tuple

    def __post_init__(self):
        for d, m in self.blocks:
            if m < 1:
                raise GeometryError("block column count must be positive")

    @property
    def dim(self) -> int:
        return self.blocks[0][0].dim

    @property
    def total_columns(self) -> int:
        return sum(m for _, m in self.blocks)

    def rearranged(self) -> "BlockSpec":
        return BlockSpec(tuple((d.rearranged(), m) for d, m in self.blocks))


def sample_point(density: Density, rng: RngStream) -> np.ndarray:
    return density.sample(rng.generator(), 1)[0]


def sample_points(density: Density, count: int, rng: RngStream) -> np.ndarray:
    return density.sample(rng.generator(), count)


def sample_matrix(spec: BlockSpec, rng: RngStream) -> np.ndarray:
    """n x m matrix whose column blocks are i.i.d. draws per block density."""
    gen = rng.generator()
    cols = [d.sample(gen, m) for d, m in spec.blocks]
    return np.vstack(cols).T


def random_hull(density: Density, m: int, rng: RngStream) -> VPolytope:
    """Hull of m independent draws; degenerate hulls are legal output."""
    if m < 1:
        raise GeometryError("random hull needs at least one point")
    return hull(density.sample(rng.generator(), m))


def random_zonotope(density: Density, m: int, rng: RngStream) -> Zonotope:
    """Sum of m centered random segments [-X_j, X_j]."""
    return Zonotope(density.sample(rng.generator(), m))


def random_lp_body(density: Density, m: int, p: float, rng: RngStream) -> VPolytope:
    """Image X B_p^m of the p-ball under a random matrix with i.i.d. columns."""
    if p < 1:
        raise GeometryError("random lp body needs p >= 1")
    X = density.sample(rng.generator(), m)  # rows are columns of the map
    if math.isinf(p):
        return zonotope_to_vpolytope(Zonotope(X))
    if p == 1:
        return hull(np.vstack([X, -X]))
    C = lp_ball_body(m, p)
    return hull(C.vertices @ X)
