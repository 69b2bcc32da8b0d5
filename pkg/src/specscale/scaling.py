"""Learning per-feature scaling factors from partial labels.

A label-derived target vector is declared to be the Fiedler vector of the
similarity graph of the (scaled) training data. Under a first-order expansion
of the Gaussian kernel the unknown factors appear linearly, which turns the
constrained Laplacian eigenproblem into an eigenproblem of a rectangular
matrix pencil

    [A alpha; gamma^T rho] [s; -1]  =  mu [B beta; 0^T 0] [s; -1],

whose eigenvector carries the factors s and whose eigenvalue mu equals one
minus the targeted Laplacian eigenvalue. ``learn_scaling`` solves that pencil
and selects the candidate with mu closest to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigensolvers import DEFAULT_RESIDUAL_TOL, pencil_residual, rect_pencil_eig
from .errors import (
    DegenerateSupervisionError,
    InternalConsistencyError,
    NoEigenpairError,
    NonNormalizableError,
    NoScalingError,
)
from .similarity import PairwiseDifferences, as_values, pairwise_sqdiff, scaled_sqdist

_LAST_COMPONENT_TOL = 1e-12


@dataclass(frozen=True)
class FiedlerEstimate:
    """Two-valued stand-in for the Fiedler vector, one value per label group."""

    values: np.ndarray
    negative_value: float
    positive_value: float = 1.0


def estimate_fiedler(labels, negative_value=-0.2, degrees=None) -> FiedlerEstimate:
    """Build the target vector: positive class maps to 1, the other to a fixed
    negative value.

    ``negative_value="auto"`` computes -b with b the ratio of degree sums of
    the two groups, which makes the zero-mean constraint e^T D v = 0 hold
    exactly for the supplied degrees. The positive class is the smaller label
    value.
    """
    labels = np.asarray(labels)
    classes = np.unique(labels)
    if classes.size != 2:
        raise DegenerateSupervisionError(
            f"need exactly two classes in the training labels, got {classes.size}"
        )
    positive_mask = labels == classes[0]
    if negative_value == "auto":
        if degrees is None:
            raise ValueError("negative_value='auto' requires degrees")
        degrees = np.asarray(degrees, dtype=float)
        if degrees.shape != labels.shape or np.any(degrees <= 0):
            raise ValueError("degrees must be positive and match the labels")
        b = degrees[positive_mask].sum() / degrees[~positive_mask].sum()
        neg = -float(b)
    else:
        neg = float(negative_value)
    v = np.where(positive_mask, 1.0, neg)
    return FiedlerEstimate(values=v, negative_value=neg)


@dataclass(frozen=True)
class PencilSystem:
    """Assembled pencil blocks together with the kernel width that scaled them."""

    A: np.ndarray
    B: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    rho: float
    sigma: float

    @property
    def n_samples(self):
        return self.A.shape[0]

    @property
    def n_features(self):
        return self.A.shape[1]

    def F(self):
        n, m = self.A.shape
        out = np.empty((n + 1, m + 1))
        out[:n, :m] = self.A
        out[:n, m] = self.alpha
        out[n, :m] = self.gamma
        out[n, m] = self.rho
        return out

    def G(self):
        n, m = self.B.shape
        out = np.zeros((n + 1, m + 1))
        out[:n, :m] = self.B
        out[:n, m] = self.beta
        return out


def assemble_pencil(X, fiedler, sigma, diffs: PairwiseDifferences | None = None) -> PencilSystem:
    """Assemble the pencil blocks from training data and the target vector.

    ``diffs`` may carry precomputed pairwise squared differences for the same
    X (any kernel width); they are rescaled to ``sigma``.
    """
    values = as_values(X)
    v = fiedler.values if isinstance(fiedler, FiedlerEstimate) else np.asarray(fiedler, float)
    n, m = values.shape
    if v.shape != (n,):
        raise ValueError(f"target vector length {v.shape} does not match {n} samples")
    if diffs is None:
        diffs = pairwise_sqdiff(values, sigma)
    elif diffs.sigma != sigma:
        diffs = diffs.rescaled(sigma)
    if diffs.n_samples != n:
        raise ValueError("precomputed differences do not match X")

    A = np.einsum("ijk,j->ik", diffs.sqdiff, v) * diffs.scale
    B = v[:, None] * diffs.xhat
    alpha = v.sum() - v
    beta = (n - 1) * v
    gamma = diffs.xhat.T @ v
    rho = (n - 1) * v.sum()

    # column sums of A and B agree by the symmetry of the pair tensor; a
    # violation can only come from a bug upstream
    drift = np.max(np.abs((A - B).sum(axis=0)))
    if drift > 1e-10 * max(np.linalg.norm(A), 1e-300):
        raise InternalConsistencyError(
            f"(A - B)^T e = {drift:.3e} exceeds the assembly tolerance"
        )
    return PencilSystem(A=A, B=B, alpha=alpha, beta=beta, gamma=gamma,
                        rho=float(rho), sigma=float(sigma))


@dataclass(frozen=True)
class ScalingVector:
    """Learned factors with the selected eigenvalue and its certificates.

    ``residual`` is the relative pencil residual evaluated at [factors; -1];
    ``certified`` records whether it met the requested tolerance (for tall
    systems with many more samples than features the pencil is overdetermined
    and only an approximate, minimal-perturbation style solution exists).
    """

    factors: np.ndarray
    eigenvalue: float
    residual: float
    constraint_violation: float
    certified: bool = True

    @property
    def n_features(self):
        return self.factors.shape[0]


def _rescaled_candidates(pairs):
    """Normalize candidate vectors to the inhomogeneous form [s; -1]."""
    out = []
    skipped_all = True
    for rank, pair in enumerate(pairs):
        w = pair.vector
        last = w[-1]
        if abs(last) < _LAST_COMPONENT_TOL:
            continue
        skipped_all = False
        s = -(w[:-1] / last)
        out.append((pair, s))
    return out, skipped_all


def learn_scaling(ps: PencilSystem, residual_tol=DEFAULT_RESIDUAL_TOL) -> ScalingVector:
    """Solve the assembled pencil for scaling factors.

    Certified eigenpairs are requested first; each candidate vector is rescaled
    so its last component is -1 and the one with real part of mu closest to one
    wins (ties by smaller residual, then the solver's deterministic order).
    Complex selections are repaired by taking real parts and re-certifying.

    When no candidate certifies, which is the generic situation for
    overdetermined systems (more training samples than features), the same
    selection runs over the uncertified candidate pool and the achieved
    residual is reported with ``certified=False``.
    """
    F, G = ps.F(), ps.G()

    def finish(pair, s, certified_pool):
        mu = float(np.real(pair.value))
        s_real = np.ascontiguousarray(np.real(s), dtype=float)
        vec = np.concatenate([s_real, [-1.0]])
        res = pencil_residual(F, G, mu, vec)
        violation = abs(float(ps.gamma @ s_real - ps.rho))
        if certified_pool and res > residual_tol:
            return None
        return ScalingVector(
            factors=s_real,
            eigenvalue=mu,
            residual=res,
            constraint_violation=violation,
            certified=bool(res <= residual_tol),
        )

    def attempt(pairs, certified_pool, raise_nonnormalizable):
        candidates, all_tiny = _rescaled_candidates(pairs)
        if not candidates:
            if all_tiny and pairs and raise_nonnormalizable:
                raise NonNormalizableError(
                    "every candidate eigenvector has a vanishing last component"
                )
            return None
        order = sorted(
            range(len(candidates)),
            key=lambda i: (abs(np.real(candidates[i][0].value) - 1.0),
                           candidates[i][0].residual, i),
        )
        for i in order:
            pair, s = candidates[i]
            result = finish(pair, s, certified_pool)
            if result is not None:
                return result
        return None

    try:
        result = attempt(
            rect_pencil_eig(F, G, residual_tol),
            certified_pool=True,
            raise_nonnormalizable=False,
        )
        if result is not None:
            return result
    except NoEigenpairError:
        pass

    # minimal-perturbation fallback: keep every finite candidate and report the
    # residual that was actually achieved
    try:
        pairs = rect_pencil_eig(F, G, residual_tol=math.inf)
    except NoEigenpairError as exc:
        raise NoScalingError("the pencil produced no usable candidates") from exc
    result = attempt(pairs, certified_pool=False, raise_nonnormalizable=True)
    if result is None:
        raise NoScalingError("the pencil produced no usable candidates")
    return result


def apply_scaling(Y, scaling):
    """Scale columns by sqrt(|s_j|); return the scaled data and the sign vector.

    For nonnegative factors, Euclidean distances on the result equal the
    weighted metric exactly; signs are returned so callers can reconstruct the
    signed metric when some factors are negative.
    """
    factors = np.asarray(getattr(scaling, "factors", scaling), dtype=float)
    values = as_values(Y)
    if values.shape[1] != factors.shape[0]:
        raise ValueError(
            f"data has {values.shape[1]} features but scaling has {factors.shape[0]}"
        )
    scaled = values * np.sqrt(np.abs(factors))
    signs = np.sign(factors)
    if hasattr(Y, "values") and hasattr(Y, "feature_names"):
        from .data import DataMatrix

        return (
            DataMatrix(
                values=scaled,
                feature_names=list(Y.feature_names),
                labels=None if Y.labels is None else Y.labels.copy(),
                standardized=False,
            ),
            signs,
        )
    return scaled, signs


def scaling_table(scaling, feature_names) -> str:
    """Two-column text table (feature name, factor), one line per feature."""
    factors = np.asarray(getattr(scaling, "factors", scaling), dtype=float)
    if len(feature_names) != factors.shape[0]:
        raise ValueError("feature_names length does not match the factors")
    lines = ["feature\tscaling_factor"]
    lines.extend(f"{name}\t{repr(float(f))}" for name, f in zip(feature_names, factors))
    return "\n".join(lines) + "\n"


def linearized_weights(diffs: PairwiseDifferences, factors) -> np.ndarray:
    """First-order kernel weights 1 - s^T x_ij / (2 sigma^2), zero diagonal."""
    factors = np.asarray(getattr(factors, "factors", factors), dtype=float)
    w = 1.0 - (diffs.sqdiff @ factors) * diffs.scale
    np.fill_diagonal(w, 0.0)
    return w


def linearization_violation_fraction(X, scaling, sigma) -> float:
    """Fraction of training pairs outside the expansion's validity region.

    The first-order form of the kernel assumes 0 < s^T x_ij / (2 sigma^2) < 1
    for each pair; this reports how often that fails (over unordered pairs).
    """
    factors = np.asarray(getattr(scaling, "factors", scaling), dtype=float)
    values = as_values(X)
    d2 = scaled_sqdist(values, factors)
    n = values.shape[0]
    iu = np.triu_indices(n, k=1)
    t = d2[iu] / (2.0 * sigma**2)
    return float(np.mean((t <= 0.0) | (t >= 1.0)))
