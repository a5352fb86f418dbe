"""Steiner symmetrization: volume stays fixed, the body becomes a ball."""
import math

import numpy as np

from pettylab import (
    chord_shadow_system,
    shadow_at,
    solid_simplex,
    sphere_directions,
    steiner_symmetrize,
    volume,
)

K = solid_simplex(2)
vol0 = volume(K)
gen = np.random.default_rng(7)
U = sphere_directions(2, 128)

print("iter  volume drift   distance to ball (rel)")
S = K
for i in range(12):
    u = gen.normal(size=2)
    S = steiner_symmetrize(S, u)
    r = math.sqrt(volume(S) / math.pi)
    hv = S.support_batch(U)
    gap = float(np.abs(hv - r).max()) / (2.0 * r)
    print(f"{i:4d}  {volume(S) - vol0:12.2e}   {gap:.4f}")

# a chord shadow system slides between the body, its symmetral, and its mirror
u = np.array([1.0, 0.3])
sys_ = chord_shadow_system(K, u)
print()
print("shadow system volumes stay constant and convex in t:")
for t in np.linspace(0.0, 1.0, 5):
    print(f"  t={t:.2f}  |K_t| = {volume(shadow_at(sys_, t)):.6f}")
