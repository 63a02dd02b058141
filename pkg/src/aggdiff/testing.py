"""Seeded generators of nonnegative radial test densities.

Shared by the property-test suite and the built-in self-test command so
that both exercise the same family of fields: random mixtures of Gaussian
shells, compact bumps, and ball indicators, with occasional cusps.  All
randomness flows through a caller-supplied numpy Generator.
"""

from __future__ import annotations

import numpy as np

from .field import RadialField, RadialGrid, field_from_function

__all__ = ["random_density", "trial_densities"]


def random_density(grid: RadialGrid, rng: np.random.Generator) -> RadialField:
    """One random nonnegative density with support well inside the grid."""
    r_scale = grid.r_max / 4.0
    kind = rng.integers(0, 3)
    n_comp = int(rng.integers(1, 4))

    # freeze the random component parameters before vector evaluation
    comps = []
    for _ in range(n_comp):
        comps.append(
            (
                rng.uniform(0.1, 3.0),
                rng.uniform(0.15, 1.0) * r_scale,
                rng.uniform(0.0, 1.5) * r_scale,
            )
        )

    def frozen_profile(r):
        out = np.zeros_like(r)
        for amp, width, center in comps:
            if kind == 0:
                out += amp * np.exp(-(((r - center) / width) ** 2))
            elif kind == 1:
                out += amp * np.maximum(1.0 - ((r - center) / width) ** 2, 0.0)
            else:
                out += amp * (np.abs(r - center) < width).astype(float)
        return out

    return field_from_function(grid, frozen_profile)


def trial_densities(grid: RadialGrid, m: float) -> list[RadialField]:
    """A fixed gallery of 20 candidate maximizer shapes: Gaussians of several
    widths, uniform balls, parabolic and high-power bumps, exponential cusps,
    and annuli (useful after rearrangement)."""
    r0 = grid.r_max / 4.0
    gallery = []
    for w in (0.4, 0.7, 1.0, 1.4):
        gallery.append(lambda r, w=w: np.exp(-((r / (w * r0)) ** 2)))
    for w in (0.5, 0.8, 1.2):
        gallery.append(lambda r, w=w: (r < w * r0).astype(float))
    for p in (1.0, 2.0, 1.0 / (m - 1.0)):
        gallery.append(lambda r, p=p: np.maximum(1.0 - (r / r0) ** 2, 0.0) ** p)
    for w in (0.5, 1.0, 1.5):
        gallery.append(lambda r, w=w: np.exp(-r / (w * r0)))
    for (ri, ro) in ((0.3, 0.8), (0.5, 1.0), (0.2, 1.2)):
        gallery.append(
            lambda r, ri=ri, ro=ro: ((r > ri * r0) & (r < ro * r0)).astype(float)
        )
    for w in (0.6, 0.9):
        gallery.append(lambda r, w=w: 1.0 / (1.0 + (r / (w * r0)) ** 4))
    gallery.append(lambda r: np.exp(-((r / r0) ** 4)))
    gallery.append(lambda r: np.maximum(1.0 - r / r0, 0.0))
    return [field_from_function(grid, f) for f in gallery[:20]]
