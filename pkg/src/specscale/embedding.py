"""Spectral embedding from the constrained Laplacian pair, plus the Ncut value."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .eigensolvers import DEFAULT_SKIP_TOL, sym_gen_eig
from .errors import DegenerateVectorError
from .similarity import SimilarityGraph


@dataclass
class Embedding:
    """Rows are reduced samples; columns are D-orthonormal eigenvectors."""

    vectors: np.ndarray  # (n_samples, ell)
    eigenvalues: np.ndarray  # ascending, all above the deflation threshold

    @property
    def ell(self):
        return self.vectors.shape[1]


def embed(graph: SimilarityGraph, ell, skip_tol=DEFAULT_SKIP_TOL) -> Embedding:
    """Embed graph vertices on the eigenvectors of L u = lambda D u.

    Near-zero eigenvalues are deflated before the ``ell`` smallest remaining
    pairs are taken, so on a connected graph every returned vector satisfies
    the constraint e^T D u = 0. Eigenvector signs are fixed so that the first
    significant component of each column is positive.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    pairs = sym_gen_eig(graph.dense_laplacian(), graph.degrees, ell, skip_tol)
    vectors = np.column_stack([p.vector for p in pairs])
    eigenvalues = np.array([p.value for p in pairs], dtype=float)
    return Embedding(vectors=vectors, eigenvalues=eigenvalues)


class NcutValue(NamedTuple):
    value: float
    constraint_residual: float


def ncut_objective(graph: SimilarityGraph, v) -> NcutValue:
    """Normalized-cut quotient v^T (D - W) v / (v^T D v).

    Also reports e^T D v, the residual of the zero-mean constraint the relaxed
    problem imposes on its eigenvectors.
    """
    v = np.asarray(v, dtype=float)
    dv = graph.degrees * v
    denom = float(v @ dv)
    if denom == 0.0:
        raise DegenerateVectorError("v^T D v is zero")
    quad = float(v @ (graph.laplacian @ v))
    return NcutValue(value=quad / denom, constraint_residual=float(dv.sum()))
