"""Synthetic regression targets built without any perslap code.

The fullerene target energies are an affine map of curve areas computed
here from scratch (contact-graph Laplacian, numpy only) plus seeded noise.
The B-factor target is a planted linear model on standardized features.
"""

from __future__ import annotations

import numpy as np

STATS = ("sum", "avg", "max", "std", "var", "sec")


def contact_area(x: np.ndarray, alpha: str, dr: float = 0.01) -> float:
    diff = x[:, None, :] - x[None, :, :]
    d = np.sqrt((diff**2).sum(-1))
    top = d.max() / 2 + dr
    radii = np.arange(int(np.floor(top / dr + 1e-9)) + 1) * dr
    total = 0.0
    for r in radii:
        adj = (d <= 2 * r * (1 + 1e-10)).astype(float)
        np.fill_diagonal(adj, 0.0)
        ev = np.linalg.eigvalsh(np.diag(adj.sum(1)) - adj)
        if alpha == "sum":
            v = ev.sum()
        elif alpha == "avg":
            v = ev.mean()
        elif alpha == "max":
            v = ev.max()
        elif alpha == "std":
            v = ev.std()
        elif alpha == "var":
            v = ev.var()
        else:
            nz = ev[ev > 1e-9 * max(1.0, ev.max())]
            v = nz.min() if nz.size else 0.0
        total += v
    return -total * dr


def surrogate_energies(clouds: dict[str, np.ndarray], alpha: str, seed: int = 7) -> dict[str, float]:
    """Affine image of the areas onto 0.4..1.2 eV/atom, plus 1% noise of that span."""
    names = list(clouds)
    a = np.array([contact_area(np.asarray(clouds[n]), alpha) for n in names])
    e = 0.4 + 0.8 * (a - a.min()) / (a.max() - a.min())
    e += np.random.default_rng(seed).normal(scale=0.01 * 0.8, size=e.size)
    return dict(zip(names, e.tolist()))


def planted_bfactors(features: np.ndarray, seed: int = 11) -> tuple[np.ndarray, np.ndarray]:
    """Noise-free targets ``w0 + z @ w`` on per-column z-scored features."""
    x = np.asarray(features, dtype=float)
    sd = x.std(0)
    z = (x - x.mean(0)) / np.where(sd > 0, sd, 1.0)
    w = np.random.default_rng(seed).normal(size=x.shape[1] + 1)
    w[0] = 25.0
    return w, w[0] + z @ w[1:]
