"""Maximum-likelihood fitting of the ordinal models by Fisher scoring.

Reverse-representation specs are fitted canonically on the relabeled response
k+1-y and re-expressed afterwards: both families keep identical location and
dispersion coefficients under relabeling while the intercept (and any
category-specific) blocks reverse their index order, which reproduces the
reversed scaling factor exactly. That index reversal is an involution, so the
same permutation converts parameters in either direction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .data import OrdinalDataset
from .design import ModelSpec, ParamLayout, build_design_tensor, expand_design
from .exceptions import (
    DataError,
    SeparationWarning,
    SpecError,
    StartError,
    ThresholdOrderError,
    ZeroProbabilityWarning,
)
from .links import PROB_FLOOR, Family, category_probs

SEPARATION_BOUND = 30.0
WEIGHT_FLOOR = 1e-12  # probability floor inside score/information weights


@dataclass
class FitResult:
    """Estimates, covariance, and diagnostics of one fitted model."""

    spec: ModelSpec
    layout: ParamLayout
    params: np.ndarray
    covariance: np.ndarray
    loglik: float
    deviance: float
    df_residual: int
    n: int
    k: int
    iterations: int
    converged: bool
    monotonicity_ok: bool | None
    se_unavailable: np.ndarray
    warnings: list = field(default_factory=list)
    smooths: dict = field(default_factory=dict)
    variables: list = field(default_factory=list)

    @property
    def names(self):
        return self.layout.names

    @property
    def n_params(self) -> int:
        return int(self.params.size)

    @property
    def structure(self) -> str:
        return self.spec.structure


def _check_categories(data: OrdinalDataset) -> None:
    counts = data.category_counts()
    empty = np.nonzero(counts == 0)[0] + 1
    if empty.size:
        raise DataError(
            f"response categories {empty.tolist()} are unobserved; "
            "merge categories before fitting"
        )


def _matrices(data: OrdinalDataset, spec: ModelSpec):
    """Design tensor, layout, and 0-based response in canonical orientation."""
    if spec.family.reverse:
        canon = replace(spec, family=Family(spec.family.kind, reverse=False))
        fit_data = data.relabeled()
    else:
        canon = spec
        fit_data = data
    design = expand_design(fit_data, canon)
    D, layout = build_design_tensor(design, canon, fit_data.k)
    return D, layout, fit_data.y - 1, canon, design


def _probs(eta: np.ndarray, kind: str, link) -> np.ndarray:
    return category_probs(Family(kind), link, eta)


def _loglik(probs: np.ndarray, y0: np.ndarray) -> float:
    picked = probs[np.arange(y0.size), y0]
    return float(np.log(np.maximum(picked, PROB_FLOOR)).sum())


def _logprob_jacobian(eta, probs, kind, link) -> np.ndarray:
    """A[i, c, r] = d log pi_c / d eta_r for observation i."""
    n, k = probs.shape
    q = k - 1
    if kind == "cumulative":
        f = link.density(eta)
        pid = np.maximum(probs, WEIGHT_FLOOR)
        A = np.zeros((n, k, q))
        idx = np.arange(q)
        A[:, idx, idx] = f / pid[:, :q]
        A[:, idx + 1, idx] = -f / pid[:, 1:]
    else:
        tails = np.cumsum(probs[:, ::-1], axis=1)[:, ::-1]  # sum_{m >= c} pi_m
        ind = (np.arange(k)[:, None] >= np.arange(1, k)[None, :]).astype(float)
        A = ind[None, :, :] - tails[:, None, 1:]
    return A


def _score_info(D, eta, probs, y0, kind, link):
    """Observed score and expected information assembled from design rows.

    The per-observation information in predictor space is the multinomial
    covariance of the log-probability gradient, sum_c pi_c A_c A_c'.
    """
    A = _logprob_jacobian(eta, probs, kind, link)
    u = A[np.arange(y0.size), y0, :]
    score_vec = np.einsum("nr,nrp->p", u, D)
    W = np.einsum("nc,ncr,ncs->nrs", probs, A, A)
    info = np.tensordot(D, np.matmul(W, D), axes=([0, 1], [0, 1]))
    return score_vec, info


def _reverse_permutation(layout: ParamLayout) -> np.ndarray:
    """Self-inverse index map between canonical and reversed parameter order."""
    q = layout.q
    perm = np.arange(layout.n_params)
    perm[:q] = np.arange(q)[::-1]
    if layout.structure == "catspec":
        for r in range(q):
            src = layout.catspec_block(q - r)
            perm[q + r * layout.p:q + (r + 1) * layout.p] = np.arange(src.start, src.stop)
    return perm


def _covariance(info: np.ndarray):
    """Inverse information with honest flags for numerically singular slots."""
    eigval, eigvec = np.linalg.eigh(info)
    lam_max = float(eigval.max(initial=0.0))
    null = eigval <= max(lam_max, 1.0) * 1e-10
    if null.any():
        inv = np.where(null, 0.0, 1.0 / np.where(null, 1.0, eigval))
        cov = (eigvec * inv) @ eigvec.T
        bad = (np.abs(eigvec[:, null]) > 1e-8).any(axis=1)
    else:
        cov = (eigvec / eigval) @ eigvec.T
        bad = np.zeros(info.shape[0], dtype=bool)
    return cov, bad


def _as_canonical(params, layout: ParamLayout, spec: ModelSpec) -> np.ndarray:
    params = np.asarray(params, dtype=float)
    if params.shape != (layout.n_params,):
        raise SpecError(f"expected {layout.n_params} parameters, got {params.shape}")
    if spec.family.reverse:
        return params[_reverse_permutation(layout)]
    return params


def log_likelihood(params, data: OrdinalDataset, spec: ModelSpec) -> float:
    """Multinomial log-likelihood at ``params``, probabilities clamped at 1e-15.

    Warns when an observed response falls in a floor-probability category;
    cumulative specs raise ThresholdOrderError at infeasible parameters.
    """
    D, layout, y0, canon, _ = _matrices(data, spec)
    theta = _as_canonical(params, layout, spec)
    probs = _probs(D @ theta, canon.family.kind, canon.link)
    picked = probs[np.arange(y0.size), y0]
    if np.any(picked <= PROB_FLOOR):
        warnings.warn(
            "observed categories with probability at the 1e-15 floor",
            ZeroProbabilityWarning,
            stacklevel=2,
        )
    return _loglik(probs, y0)


def score(params, data: OrdinalDataset, spec: ModelSpec) -> np.ndarray:
    """Analytic gradient of log_likelihood with respect to ``params``."""
    D, layout, y0, canon, _ = _matrices(data, spec)
    theta = _as_canonical(params, layout, spec)
    eta = D @ theta
    probs = _probs(eta, canon.family.kind, canon.link)
    s, _ = _score_info(D, eta, probs, y0, canon.family.kind, canon.link)
    if spec.family.reverse:
        s = s[_reverse_permutation(layout)]
    return s


def fisher_info(params, data: OrdinalDataset, spec: ModelSpec) -> np.ndarray:
    """Expected information matrix at ``params``."""
    D, layout, y0, canon, _ = _matrices(data, spec)
    theta = _as_canonical(params, layout, spec)
    eta = D @ theta
    probs = _probs(eta, canon.family.kind, canon.link)
    _, info = _score_info(D, eta, probs, y0, canon.family.kind, canon.link)
    if spec.family.reverse:
        perm = _reverse_permutation(layout)
        info = info[np.ix_(perm, perm)]
    return info


def category_probabilities(params, data: OrdinalDataset, spec: ModelSpec) -> np.ndarray:
    """Category probabilities (n, k) at ``params`` in the original labels."""
    D, layout, y0, canon, _ = _matrices(data, spec)
    theta = _as_canonical(params, layout, spec)
    probs = _probs(D @ theta, canon.family.kind, canon.link)
    return probs[:, ::-1] if spec.family.reverse else probs


def _initial_params(layout: ParamLayout, y0: np.ndarray, kind: str, link) -> np.ndarray:
    counts = np.bincount(y0, minlength=layout.k).astype(float)
    theta = np.zeros(layout.n_params)
    if kind == "cumulative":
        cum = np.cumsum(counts)[: layout.q] / counts.sum()
        theta[: layout.q] = link.quantile(cum)
    else:
        theta[: layout.q] = np.log(counts[1:] / counts[:-1])
    return theta


def fit(
    spec: ModelSpec,
    data: OrdinalDataset,
    *,
    max_iter: int = 100,
    tol: float = 1e-8,
    score_tol: float = 1e-4,
    start=None,
) -> FitResult:
    """Fisher scoring with step halving until the deviance stabilizes.

    A step is halved (up to 10 times) when it would increase the deviance or,
    for cumulative specs, cross any observation's thresholds; two consecutive
    iterations without an accepted step stop the fit with converged=False.
    Convergence requires relative deviance change < tol and max |score| <
    score_tol * (1 + |loglik|) at the same iteration. The covariance is the
    inverse expected information at the optimum.
    """
    _check_categories(data)
    D, layout, y0, canon, design = _matrices(data, spec)
    kind, link = canon.family.kind, canon.link

    if start is not None:
        theta = np.asarray(start, dtype=float).copy()
        if theta.shape != (layout.n_params,):
            raise StartError(f"start has {theta.shape} entries, expected {layout.n_params}")
        if spec.family.reverse:
            theta = theta[_reverse_permutation(layout)]
        try:
            eta = D @ theta
            probs = _probs(eta, kind, link)
        except ThresholdOrderError as exc:
            raise StartError(f"infeasible start: {exc}") from exc
    else:
        theta = _initial_params(layout, y0, kind, link)
        eta = D @ theta
        probs = _probs(eta, kind, link)

    deviance = -2.0 * _loglik(probs, y0)
    converged = False
    iterations = 0
    failures = 0
    for iteration in range(1, max_iter + 1):
        iterations = iteration
        s, info = _score_info(D, eta, probs, y0, kind, link)
        try:
            step = np.linalg.solve(info, s)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(info, s, rcond=None)[0]
        accepted = False
        lam = 1.0
        for _ in range(11):
            cand = theta + lam * step
            try:
                cand_eta = D @ cand
                cand_probs = _probs(cand_eta, kind, link)
            except ThresholdOrderError:
                lam /= 2.0
                continue
            cand_dev = -2.0 * _loglik(cand_probs, y0)
            if np.isfinite(cand_dev) and cand_dev <= deviance:
                accepted = True
                break
            lam /= 2.0
        if not accepted:
            # a rejected step at a stationary point is convergence, not
            # failure: the deviance is already flat to rounding and the
            # score is below tolerance
            if np.max(np.abs(s)) < score_tol * (1.0 + abs(deviance) / 2.0):
                converged = True
                break
            failures += 1
            if failures >= 2:
                break
            continue
        failures = 0
        rel_change = abs(deviance - cand_dev) / (abs(deviance) + 1e-10)
        theta, eta, probs, deviance = cand, cand_eta, cand_probs, cand_dev
        s_new, _ = _score_info(D, eta, probs, y0, kind, link)
        if rel_change < tol and np.max(np.abs(s_new)) < score_tol * (1.0 + abs(deviance) / 2.0):
            converged = True
            break

    _, info = _score_info(D, eta, probs, y0, kind, link)
    cov, bad = _covariance(info)

    notes = []
    big = np.nonzero(np.abs(theta[layout.q:]) > SEPARATION_BOUND)[0] + layout.q
    if big.size:
        names = [layout.names[j] for j in big]
        notes.append(
            f"possible separation: coefficients beyond |{SEPARATION_BOUND:g}| "
            f"on the link scale: {names}"
        )
        warnings.warn(
            f"possible separation; diverging coefficients {names}",
            SeparationWarning,
            stacklevel=2,
        )
    if not converged:
        notes.append("did not converge")

    monotone = None
    if kind == "cumulative":
        monotone = bool(np.all(np.diff(eta, axis=1) >= -1e-12))

    if spec.family.reverse:
        perm = _reverse_permutation(layout)
        theta = theta[perm]
        cov = cov[np.ix_(perm, perm)]
        bad = bad[perm]

    return FitResult(
        spec=spec,
        layout=layout,
        params=theta,
        covariance=cov,
        loglik=-deviance / 2.0,
        deviance=deviance,
        df_residual=data.n * (data.k - 1) - layout.n_params,
        n=data.n,
        k=data.k,
        iterations=iterations,
        converged=converged,
        monotonicity_ok=monotone,
        se_unavailable=bad,
        warnings=notes,
        smooths=design.smooths,
        variables=design.variables,
    )


def deviance_report(result: FitResult, n: int, k: int):
    """(deviance, residual df) with df = n(k-1) - n_params."""
    return result.deviance, n * (k - 1) - result.n_params


def standard_errors(result: FitResult) -> np.ndarray:
    """sqrt of the covariance diagonal; NaN where the information is singular."""
    se = np.sqrt(np.maximum(np.diag(result.covariance), 0.0)).copy()
    se[result.se_unavailable] = np.nan
    return se


def smooth_values(result: FitResult, side: str, name: str, grid) -> np.ndarray:
    """Fitted smooth f(grid) for one term, centered over the sample."""
    from .splines import bspline_basis

    try:
        info = result.smooths[(side, name)]
    except KeyError:
        raise SpecError(f"no {side} smooth for variable {name!r}") from None
    basis_matrix = bspline_basis(np.asarray(grid, dtype=float), info.basis) - info.col_means
    cols = result.layout.x_cols if side == "location" else result.layout.z_cols
    offset = (
        result.layout.location.start if side == "location" else result.layout.dispersion.start
    )
    idx = [offset + i for i, c in enumerate(cols) if c.source == name and c.basis_index]
    return basis_matrix @ result.params[idx]
