"""Indecomposable components of finite ray sets.

Two rays are linked when their overlap exceeds ``tol_orth``; components are
the connected pieces of that graph and their spans are mutually orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DimensionMismatch
from .geometry import TOL_ORTH
from .linalg import Ray, matrix_rank, orthonormal_basis


def _as_rays(E) -> list[Ray]:
    rays = [r if isinstance(r, Ray) else Ray(r) for r in E]
    if not rays:
        raise DimensionMismatch("ray set must be nonempty")
    if len({r.dim for r in rays}) != 1:
        raise DimensionMismatch("rays live in different dimensions", dims=sorted({r.dim for r in rays}))
    return rays


@dataclass(frozen=True)
class RayGraph:
    rays: tuple[Ray, ...]
    overlaps: np.ndarray  # |<ray_i, ray_j>|
    adjacency: np.ndarray  # bool, symmetric, diagonal True
    tol_orth: float


def build_ray_graph(E, tol_orth: float = TOL_ORTH) -> RayGraph:
    if tol_orth <= 0:
        raise ValueError("tol_orth must be positive")
    rays = _as_rays(E)
    R = np.stack([r.rep for r in rays])
    G = np.abs(R.conj() @ R.T)
    G = np.maximum(G, G.T)
    adj = G > tol_orth
    np.fill_diagonal(adj, True)
    return RayGraph(tuple(rays), G, adj, tol_orth)


@dataclass(frozen=True)
class Component:
    indices: tuple[int, ...]
    basis: np.ndarray  # orthonormal columns spanning the member representatives


@dataclass(frozen=True)
class ComponentDecomposition:
    components: tuple[Component, ...]
    min_coupling: float | None  # smallest overlap that still counted as an edge
    max_cross_overlap: float  # largest overlap between different components

    @property
    def partition(self) -> list[set[int]]:
        return [set(c.indices) for c in self.components]

    def subspace_cross_overlap(self) -> float:
        worst = 0.0
        comps = self.components
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                M = comps[i].basis.conj().T @ comps[j].basis
                worst = max(worst, float(np.max(np.abs(M), initial=0.0)))
        return worst


def indecomposable_components(E, tol_orth: float = TOL_ORTH) -> ComponentDecomposition:
    graph = build_ray_graph(E, tol_orth)
    k = len(graph.rays)
    count, labels = connected_components(csr_matrix(graph.adjacency), directed=False)
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(i)
    ordered = sorted(groups.values(), key=lambda g: g[0])

    comps = []
    for members in ordered:
        vecs = np.stack([graph.rays[i].rep for i in members], axis=1)
        comps.append(Component(tuple(members), orthonormal_basis(vecs)))

    off = ~np.eye(k, dtype=bool)
    edge_vals = graph.overlaps[graph.adjacency & off]
    same = labels[:, None] == labels[None, :]
    cross = graph.overlaps[~same]
    return ComponentDecomposition(
        tuple(comps),
        float(edge_vals.min()) if edge_vals.size else None,
        float(cross.max()) if cross.size else 0.0,
    )


def is_indecomposable(E, tol_orth: float = TOL_ORTH) -> bool:
    return len(indecomposable_components(E, tol_orth).components) == 1


def is_total(E, n: int | None = None, rtol: float = 1e-9) -> bool:
    rays = _as_rays(E)
    if n is None:
        n = rays[0].dim
    if n != rays[0].dim:
        raise DimensionMismatch("ambient dimension does not match the rays", expected=n, got=rays[0].dim)
    return matrix_rank(np.stack([r.rep for r in rays]), rtol) == n
