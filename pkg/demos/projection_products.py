"""Projection bodies and the volume product they generate."""
import math

import numpy as np

from pettylab import (
    ball_body,
    cube_body,
    hull,
    petty_product,
    polar_projection_polytope,
    projection_body,
    solid_simplex,
    support,
    volume,
    zonotope_to_vpolytope,
)

# the projection body of the square: support = shadow length
square = cube_body(2)
Z = projection_body(square)
for name, u in (("e1", np.array([1.0, 0.0])), ("diag", np.array([1.0, 1.0]) / math.sqrt(2))):
    print(f"shadow of the square along {name}: {support(Z, u):.6f}")
print("projection body vertices:")
print(zonotope_to_vpolytope(Z).vertices)

# the product |polar projection body| * |K|^(n-1) is affine invariant
print()
print("body                product   ball value")
rows = [
    ("square           ", cube_body(2), math.pi**2 / 4),
    ("triangle         ", solid_simplex(2), math.pi**2 / 4),
    ("64-gon           ", ball_body(2), math.pi**2 / 4),
    ("cube             ", cube_body(3), 64.0 / 27.0),
    ("320-facet ball   ", ball_body(3), 64.0 / 27.0),
]
for name, K, ball_value in rows:
    print(f"{name}  {petty_product(K):.6f}  {ball_value:.6f}")

# triangles minimize in the plane, balls maximize in every dimension
gen = np.random.default_rng(1)
worst = (None, 0.0)
best = (None, 10.0)
for _ in range(300):
    K = hull(gen.normal(size=(gen.integers(4, 9), 2)))
    p = petty_product(K)
    if p > worst[1]:
        worst = (K, p)
    if p < best[1]:
        best = (K, p)
print()
print(f"300 random polygons: products range {best[1]:.4f} .. {worst[1]:.4f}")
print(f"  (triangle value 1.5, disk value {math.pi**2 / 4:.4f})")

# exact polar path vs spherical quadrature
K = hull(gen.normal(size=(7, 2)))
exact = petty_product(K, method="exact")
quad = petty_product(K, method="quadrature")
print()
print(f"one random body, exact {exact:.8f} vs quadrature {quad:.8f}")

pp = polar_projection_polytope(square)
print("polar projection body of the square, volume", volume(pp))
