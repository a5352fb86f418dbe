"""Tour of the geometric kernel: bodies, volumes, duals, zonotopes."""
import numpy as np

from pettylab import (
    Zonotope,
    cross_body,
    cube_body,
    hull,
    mixed_volume,
    polar,
    solid_simplex,
    support,
    volume,
    zonotope_to_vpolytope,
)

# basic bodies
square = cube_body(2)
triangle = solid_simplex(2)
cube = cube_body(3)
print("area of [-1,1]^2      ", volume(square))
print("area of unit simplex  ", volume(triangle))
print("volume of [-1,1]^3    ", volume(cube))

# support function = farthest extent in a direction
u = np.array([1.0, 1.0]) / np.sqrt(2)
print("square support along the diagonal", support(square, u))

# polar duality swaps the cube and the cross polytope
print("polar of the square has vertices")
print(polar(square).vertices)
print("area product |K| * |K*| =", volume(square) * volume(polar(square)))
print("same product for the cross polytope:",
      volume(cross_body(2)) * volume(polar(cross_body(2))))

# zonotopes: Minkowski sums of segments, volume by generator determinants
gens = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
Z = Zonotope(gens)
P = zonotope_to_vpolytope(Z)
print("hexagon zonotope volume", volume(Z), "=", volume(P), "as a vertex polytope")

# mixed volumes interpolate between the volumes of two bodies
K, L = square, hull(np.array([[2.0, 0.0], [-1.0, 1.5], [-1.0, -1.5]]))
for lam in (0.0, 0.5, 1.0, 2.0):
    combo = hull((K.vertices[:, None, :] + lam * L.vertices[None, :, :]).reshape(-1, 2))
    expansion = (
        volume(K)
        + 2.0 * lam * mixed_volume([K, L])
        + lam**2 * volume(L)
    )
    print(f"|K + {lam}L| = {volume(combo):.6f}  polynomial {expansion:.6f}")
