"""Multidimensional scaling by SMACOF stress majorization.

The scaler accepts a :class:`~cocmap.matrices.ProximityMatrix` of either
kind: similarities are first turned upside down via
``dissimilarity = constant - similarity`` with the constant chosen as the
matrix maximum, after which both kinds follow the identical iteration, so
the two entry points produce the same configuration.

Proximities may be treated at three measurement levels.  At each outer
iteration the dissimilarities are optimally transformed into *disparities*:

* ``ratio``    -- ``d_hat = b * delta`` with ``b >= 0``;
* ``interval`` -- ``d_hat = a + b * delta`` with ``a, b >= 0`` (a non-negative
  fit, so disparities never need clamping);
* ``ordinal``  -- monotone (isotonic) regression of the configuration
  distances in ascending ``delta`` order, with tied proximities untied (tied
  blocks are ordered by current distance and may receive distinct values).

Disparities are rescaled every outer iteration so that their weighted sum
of squares equals ``n (n - 1) / 2``, which pins the stress denominator and
prevents the degenerate collapse solution in the nonmetric case.  The
reported badness of fit is normalized raw stress

    sigma_n = sum_w (d_hat - d(X))^2 / sum_w d_hat^2

over the upper-triangle pairs (diagonal weight 0, missing proximities
weight 0).  Note sigma_n is the square of Kruskal's stress-1 for the same
disparities, so cross-software comparisons must square or root accordingly.
Each majorization step cannot increase sigma_n, so the recorded stress
sequence is non-increasing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateConfiguration,
    DegenerateInput,
    DimensionTooLarge,
)
from .factor import eigen_symmetric
from .matrices import MEASUREMENT_LEVELS, ProximityMatrix
from .proximity import to_dissimilarity


@dataclass(frozen=True)
class MdsConfig:
    """Settings for one scaling run.

    ``init`` is ``"classical"`` (Torgerson start, deterministic) or
    ``"random"``, which requires an explicit ``seed``.  ``epsilon`` is the
    stress-change convergence threshold.  ``kind_override`` forces the input
    to be treated as the given kind regardless of its tag (useful for
    demonstrating what happens when similarity and dissimilarity are
    confused).
    """

    dimensions: int = 2
    level: str = "ratio"
    kind_override: str | None = None
    init: str = "classical"
    seed: int | None = None
    max_iterations: int = 1000
    epsilon: float = 1e-6

    def __post_init__(self):
        if self.dimensions < 1:
            raise ValueError("dimensions must be >= 1")
        if self.level not in MEASUREMENT_LEVELS:
            raise ValueError(f"unknown level {self.level!r}")
        if self.kind_override not in (None, "similarity", "dissimilarity"):
            raise ValueError(f"unknown kind override {self.kind_override!r}")
        if self.init not in ("classical", "random"):
            raise ValueError(f"unknown init {self.init!r}")
        if self.init == "random" and self.seed is None:
            raise ValueError("random init requires an explicit seed")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True, eq=False)
class Configuration:
    """A fitted embedding: centered coordinates plus the final stress."""

    labels: tuple[str, ...]
    coords: np.ndarray
    stress: float
    iterations_used: int
    converged: bool
    stress_history: tuple[float, ...] = ()

    def __post_init__(self):
        coords = np.ascontiguousarray(np.asarray(self.coords, dtype=float))
        coords.flags.writeable = False
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "stress_history", tuple(float(s) for s in self.stress_history))


def monotone_regression(values, order=None, weights=None) -> np.ndarray:
    """Weighted isotonic (monotone non-decreasing) regression by PAVA.

    Fits the non-decreasing sequence closest in weighted least squares to
    ``values`` taken in ``order`` (indices into ``values``; identity when
    omitted), and returns the fitted values in the original positions.
    """
    y = np.asarray(values, dtype=float)
    w = np.ones_like(y) if weights is None else np.asarray(weights, dtype=float)
    if order is not None:
        order = np.asarray(order, dtype=int)
        yo, wo = y[order], w[order]
    else:
        yo, wo = y.copy(), w.copy()
    # pool adjacent violators over (value, weight) blocks
    means: list[float] = []
    wsums: list[float] = []
    sizes: list[int] = []
    for val, wt in zip(yo, wo):
        means.append(float(val))
        wsums.append(float(wt))
        sizes.append(1)
        while len(means) > 1 and means[-2] >= means[-1]:
            m2, w2, s2 = means.pop(), wsums.pop(), sizes.pop()
            m1, w1, s1 = means.pop(), wsums.pop(), sizes.pop()
            wt_total = w1 + w2
            pooled = (m1 * w1 + m2 * w2) / wt_total if wt_total > 0 else (m1 + m2) / 2
            means.append(pooled)
            wsums.append(wt_total)
            sizes.append(s1 + s2)
    fitted = np.empty_like(yo)
    pos = 0
    for m, s in zip(means, sizes):
        fitted[pos:pos + s] = m
        pos += s
    if order is not None:
        out = np.empty_like(fitted)
        out[order] = fitted
        return out
    return fitted


def classical_init(D, k: int) -> np.ndarray:
    """Torgerson double-centering start for SMACOF.

    The Gram matrix -0.5 * J D^2 J is eigendecomposed and the top-k
    eigenvectors are scaled by the square roots of their (non-negative)
    eigenvalues.  Deterministic: eigenvector signs are fixed so each
    column's largest-magnitude entry is positive.
    """
    D = np.asarray(D, dtype=float)
    n = D.shape[0]
    if k >= n:
        raise DimensionTooLarge(f"cannot embed {n} points in {k} dimensions")
    D2 = D**2
    J = np.eye(n) - np.ones((n, n)) / n
    B = -0.5 * (J @ D2 @ J)
    B = (B + B.T) / 2.0
    values, vectors = eigen_symmetric(B)
    coords = vectors[:, :k] * np.sqrt(np.maximum(values[:k], 0.0))
    return coords - coords.mean(axis=0)


def procrustes_align(X, Y):
    """Align Y to X by translation, orthogonal transform, and isotropic scale.

    Returns ``(aligned_Y, congruence)`` where congruence is one minus the
    residual sum of squares over the total variance of X, so 1 means the
    configurations match exactly up to rotation/reflection/scale/shift.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != Y.shape:
        raise ValueError("configurations must have matching shapes")
    Xc = X - X.mean(axis=0)
    Yc = Y - Y.mean(axis=0)
    ssx = float((Xc**2).sum())
    ssy = float((Yc**2).sum())
    if ssx <= 0 or ssy <= 0:
        raise DegenerateConfiguration("cannot align a zero-variance configuration")
    U, sing, Vt = np.linalg.svd(Yc.T @ Xc)
    R = U @ Vt
    scale = float(sing.sum()) / ssy
    aligned = scale * (Yc @ R) + X.mean(axis=0)
    residual = ssx - float(sing.sum()) ** 2 / ssy
    congruence = 1.0 - residual / ssx
    return aligned, float(min(max(congruence, 0.0), 1.0))


def _pairwise_distances(X: np.ndarray) -> np.ndarray:
    sq = (X**2).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    return np.sqrt(np.maximum(d2, 0.0))


def _fit_nonneg_affine(delta, dist, w):
    """Weighted least-squares fit of dist ~ a + b*delta with a, b >= 0."""
    sw = w.sum()
    swx = (w * delta).sum()
    swy = (w * dist).sum()
    swxx = (w * delta * delta).sum()
    swxy = (w * delta * dist).sum()
    det = sw * swxx - swx * swx
    candidates = []
    if det > 0:
        a = (swxx * swy - swx * swxy) / det
        b = (sw * swxy - swx * swy) / det
        if a >= 0 and b >= 0:
            candidates.append((a, b))
    if swxx > 0:
        candidates.append((0.0, max(swxy / swxx, 0.0)))
    if sw > 0:
        candidates.append((max(swy / sw, 0.0), 0.0))
    best, best_err = (0.0, 0.0), np.inf
    for a, b in candidates:
        err = float((w * (dist - a - b * delta) ** 2).sum())
        if err < best_err:
            best, best_err = (a, b), err
    return best


def transform_disparities(delta, dist, level: str, mask) -> np.ndarray:
    """Optimal level-bound transformation of configuration distances.

    Given input dissimilarities ``delta`` and current configuration
    distances ``dist`` (both square), returns the unscaled disparity matrix
    for the requested measurement level over the pairs selected by ``mask``
    (symmetric boolean, diagonal False).  Ties in the ordinal case are
    untied: tied ``delta`` blocks are ordered by current distance.
    """
    n = delta.shape[0]
    iu = np.triu_indices(n, 1)
    sel = mask[iu]
    dv = delta[iu][sel]
    xv = dist[iu][sel]
    if level == "ratio":
        denom = float((dv * dv).sum())
        b = float((dv * xv).sum()) / denom if denom > 0 else 0.0
        fitted = max(b, 0.0) * dv
        if not np.any(fitted > 0):
            fitted = dv.copy()
    elif level == "interval":
        a, b = _fit_nonneg_affine(dv, xv, np.ones_like(dv))
        fitted = a + b * dv
        if not np.any(fitted > 0):
            fitted = dv.copy()
    elif level == "ordinal":
        order = np.lexsort((xv, dv))
        fitted = monotone_regression(xv, order=order)
        fitted = np.maximum(fitted, 0.0)
        if not np.any(fitted > 0):
            fitted = dv.copy()
    else:
        raise ValueError(f"unknown level {level!r}")
    out = np.zeros((n, n))
    tmp = np.zeros(sel.shape[0])
    tmp[sel] = fitted
    out[iu] = tmp
    out = out + out.T
    return out


def _stress(dhat, dist, mask, denom) -> float:
    diff = np.where(mask, dhat - dist, 0.0)
    return float(np.triu(diff**2, 1).sum()) / denom


def mds(P: ProximityMatrix, cfg: MdsConfig = MdsConfig()) -> Configuration:
    """Fit a k-dimensional configuration to a proximity matrix by SMACOF.

    Similarity inputs are converted internally (constant = matrix maximum)
    before fitting; dissimilarities are fitted directly.  Returns a centered
    :class:`Configuration` whose ``stress_history`` records the normalized
    raw stress after every majorization step.
    """
    kind = cfg.kind_override or P.kind
    if kind == "similarity":
        work = to_dissimilarity(
            ProximityMatrix(P.labels, P.data, kind="similarity", level=P.level)
        )
    else:
        data = np.array(P.data, dtype=float)
        np.fill_diagonal(data, 0.0)
        work = ProximityMatrix(P.labels, data, kind="dissimilarity", level=P.level)
    delta = np.array(work.data, dtype=float)
    n = delta.shape[0]
    k = cfg.dimensions
    if k >= n:
        raise DimensionTooLarge(f"cannot embed {n} points in {k} dimensions")
    mask = ~np.isnan(delta)
    np.fill_diagonal(mask, False)
    mask &= mask.T
    finite = np.where(mask, delta, 0.0)
    if not np.any(finite > 0):
        raise DegenerateInput("all off-diagonal dissimilarities are zero")
    uniform = bool(mask.sum() == n * (n - 1))

    npairs = n * (n - 1) / 2.0

    def normalize(dh: np.ndarray) -> np.ndarray:
        ss = float(np.triu(np.where(mask, dh**2, 0.0), 1).sum())
        return dh * np.sqrt(npairs / ss)

    dhat = normalize(finite)

    if cfg.init == "classical":
        fill = float(delta[mask].mean())
        D0 = np.where(mask, delta, fill)
        np.fill_diagonal(D0, 0.0)
        X = classical_init(D0, k)
    else:
        rng = np.random.default_rng(cfg.seed)
        X = rng.standard_normal((n, k))
        X -= X.mean(axis=0)
    dist = _pairwise_distances(X)
    # optimal dilation of the start so the first stress is scale-free
    sxy = float(np.triu(np.where(mask, dhat * dist, 0.0), 1).sum())
    sxx = float(np.triu(np.where(mask, dist**2, 0.0), 1).sum())
    if sxx > 0 and sxy > 0:
        X = X * (sxy / sxx)
        dist = dist * (sxy / sxx)

    if not uniform:
        W = mask.astype(float)
        V = np.diag(W.sum(axis=1)) - W
        values, vectors = eigen_symmetric(V)
        inv = np.where(values > 1e-12 * max(values.max(), 1.0), 1.0 / np.where(values > 0, values, 1.0), 0.0)
        Vplus = (vectors * inv) @ vectors.T

    history = [_stress(dhat, dist, mask, npairs)]
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        # Guttman transform for the current disparities
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(mask & (dist > 0), dhat / np.where(dist > 0, dist, 1.0), 0.0)
        B = -ratio
        np.fill_diagonal(B, 0.0)
        np.fill_diagonal(B, -B.sum(axis=1))
        if uniform:
            X = (B @ X) / n
        else:
            X = Vplus @ (B @ X)
        X = X - X.mean(axis=0)
        dist = _pairwise_distances(X)
        # optimal disparities for the new distances, then renormalize
        if cfg.level == "ratio":
            pass  # with the fixed normalization, ratio disparities never move
        else:
            dhat = normalize(transform_disparities(delta, dist, cfg.level, mask))
        stress = _stress(dhat, dist, mask, npairs)
        history.append(stress)
        if history[-2] - history[-1] < cfg.epsilon:
            converged = True
            break

    return Configuration(
        labels=work.labels,
        coords=X,
        stress=history[-1],
        iterations_used=iterations,
        converged=converged,
        stress_history=tuple(history),
    )
