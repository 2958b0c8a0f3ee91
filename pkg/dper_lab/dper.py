# -*- coding: utf-8 -*-
"""
On-policy batch selection for the actor.

Every stored action was produced by some past actor plus exploration
noise. Comparing stored actions with what the current actor would do in
the same states gives a deviation matrix whose rows, for a perfectly
on-policy batch, are distributed like the exploration noise ``N(0, s I)``.
A candidate batch is scored by the KL divergence between a Gaussian fitted
to its deviations and that noise distribution; the actor trains on the
candidate with the lowest score.
"""
from __future__ import absolute_import, division, print_function, unicode_literals
import logging

import numpy as np

from .constants import KlMode
from .exceptions import ContractViolation, DegenerateBatchError, NumericDegeneracyError
from .nn_core import mlp_forward
from .replay.uniform import UniformSampler


log = logging.getLogger(__name__)

DEFAULT_JITTER = 1e-6


class KlReference(object):
    """
    Isotropic Gaussian ``N(0, variance * I)`` describing exploration noise.

    Attributes
    ----------
    variance : float
        Per-dimension variance ``s``. For Gaussian exploration with
        standard deviation ``std`` this is ``std ** 2``.
    action_dim : int
        Dimensionality ``m``
    """

    def __init__(self, variance, action_dim):
        if not variance > 0 or not np.isfinite(variance):
            raise ContractViolation(
                "Reference variance must be positive and finite, got {}.".format(
                    variance
                )
            )
        if action_dim < 1:
            raise ContractViolation("Action dimension must be positive.")
        self.variance = float(variance)
        self.action_dim = int(action_dim)

    @classmethod
    def from_exploration(cls, std, action_dim):
        return cls(float(std) ** 2, action_dim)

    def __repr__(self):
        return "<KlReference N(0, {:g} I_{})>".format(self.variance, self.action_dim)


class GeneratorStats(object):
    """
    Gaussian fitted to one batch's action deviations.

    Attributes
    ----------
    mu : ndarray
        Column means, ``m`` values
    sigma : ndarray or None
        ``m x m`` sample covariance including jitter.
        ``None`` when only the mean was estimated.
    eta : float or None
        KL score once computed
    """

    def __init__(self, mu, sigma=None, eta=None):
        self.mu = np.asarray(mu, dtype=np.float64).reshape(-1)
        self.sigma = None if sigma is None else np.asarray(sigma, dtype=np.float64)
        self.eta = eta

    def __repr__(self):
        return "<GeneratorStats |mu|^2={:.4g} eta={}>".format(
            float(self.mu.dot(self.mu)), self.eta
        )


def action_deviation(actor, batch):
    """
    ``A(s_i) - a_i`` for every transition of ``batch``, a ``b x m`` matrix.
    """
    if len(batch) == 0:
        raise ContractViolation("Cannot compute deviations of an empty batch.")
    predicted, _ = mlp_forward(actor, batch.states)
    if predicted.shape != batch.actions.shape:
        raise ContractViolation(
            "Actor produces actions of shape {}, batch stores {}.".format(
                predicted.shape, batch.actions.shape
            )
        )
    return predicted - batch.actions


def generator_stats(deviation, jitter=DEFAULT_JITTER):
    """
    Mean and unbiased covariance (divisor ``b - 1``) of the deviation rows,
    with ``jitter * I`` added to the covariance.
    """
    deviation = np.asarray(deviation, dtype=np.float64)
    if deviation.ndim != 2:
        raise ContractViolation("Deviation must be a b x m matrix.")
    rows, cols = deviation.shape
    if rows < 2:
        raise DegenerateBatchError(
            "A covariance needs at least 2 rows, got {}.".format(rows), {"rows": rows}
        )

    mu = deviation.mean(axis=0)
    centered = deviation - mu
    sigma = centered.T.dot(centered) / (rows - 1)
    sigma = 0.5 * (sigma + sigma.T) + jitter * np.eye(cols)
    return GeneratorStats(mu, sigma)


def kl_score_full(stats, reference):
    """
    ``KL(N(mu, Sigma) || N(0, s I))``.

    ``0.5 * (tr(Sigma) / s + mu.mu / s - m + m ln s - ln det Sigma)``,
    where the log-determinant comes from the Cholesky factor's diagonal.
    Rounding can leave values a hair below zero; those are clipped to 0.
    """
    m, s = reference.action_dim, reference.variance
    mu, sigma = stats.mu, stats.sigma
    if sigma is None:
        raise ContractViolation("Full KL score needs a covariance estimate.")
    if mu.shape != (m,) or sigma.shape != (m, m):
        raise ContractViolation(
            "Statistics are for {} action dimensions, reference for {}.".format(
                mu.shape[0], m
            )
        )

    try:
        factor = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise NumericDegeneracyError(
            "Generator covariance is not positive definite.",
            {"sigma": sigma.tolist()},
        )
    log_det = 2.0 * np.sum(np.log(np.diag(factor)))

    eta = 0.5 * (np.trace(sigma) / s + mu.dot(mu) / s - m + m * np.log(s) - log_det)
    if not np.isfinite(eta):
        raise NumericDegeneracyError("KL score is not finite.", {"sigma": sigma.tolist()})
    return max(float(eta), 0.0)


def kl_score_diag(mu, reference):
    """
    KL score when the covariance equals the reference: ``mu.mu / (2 s)``.
    """
    mu = np.asarray(mu, dtype=np.float64).reshape(-1)
    if mu.shape != (reference.action_dim,):
        raise ContractViolation(
            "Mean has {} dimensions, reference {}.".format(
                mu.shape[0], reference.action_dim
            )
        )
    return float(mu.dot(mu) / (2.0 * reference.variance))


class CandidateSet(object):
    """
    ``K`` candidate actor batches and their scores.

    Attributes
    ----------
    batches : list
        Candidate :class:`.Batch` objects
    metas : list
        Their :class:`.SampleMeta`, or ``None`` entries
    stats : list
        Their :class:`.GeneratorStats` with ``eta`` set
    mu_sq_norms : list
        ``|mu|^2`` per candidate
    mean_sq_devs : list
        Mean squared row deviation ``mean_i |A(s_i) - a_i|^2`` per candidate
    chosen : int
        Index of the lowest score; ties go to the lowest index
    """

    def __init__(self, batches, metas, stats, mu_sq_norms, mean_sq_devs):
        self.batches = batches
        self.metas = metas
        self.stats = stats
        self.mu_sq_norms = mu_sq_norms
        self.mean_sq_devs = mean_sq_devs
        self.chosen = int(np.argmin(self.etas))

    def __len__(self):
        return len(self.batches)

    def __repr__(self):
        return "<CandidateSet K={} chosen={} etas={}>".format(
            len(self), self.chosen, ["{:.4g}".format(e) for e in self.etas]
        )

    @property
    def etas(self):
        return [s.eta for s in self.stats]

    @property
    def chosen_batch(self):
        return self.batches[self.chosen]

    @property
    def chosen_eta(self):
        return self.etas[self.chosen]


def score_candidates(
    actor, batches, reference, mode=KlMode.full, jitter=DEFAULT_JITTER, metas=None
):
    """
    Score already drawn candidate batches.

    Returns
    -------
    CandidateSet
    """
    mode = KlMode(mode)
    if not batches:
        raise ContractViolation("At least one candidate batch is required.")

    stats, mu_sq_norms, mean_sq_devs = [], [], []
    for batch in batches:
        deviation = action_deviation(actor, batch)
        if mode is KlMode.full:
            batch_stats = generator_stats(deviation, jitter)
            batch_stats.eta = kl_score_full(batch_stats, reference)
        else:
            batch_stats = GeneratorStats(deviation.mean(axis=0))
            batch_stats.eta = kl_score_diag(batch_stats.mu, reference)
        stats.append(batch_stats)
        mu_sq_norms.append(float(batch_stats.mu.dot(batch_stats.mu)))
        mean_sq_devs.append(float(np.mean(np.sum(deviation * deviation, axis=1))))

    return CandidateSet(
        list(batches),
        list(metas) if metas is not None else [None] * len(batches),
        stats,
        mu_sq_norms,
        mean_sq_devs,
    )


def draw_candidates(memory, k, batch_size, rng, sampler=None):
    """
    Draw ``k`` candidate batches, uniformly unless another sampler is given.
    Candidates are drawn one after another from ``rng`` so the result
    does not depend on how scoring is later scheduled.
    """
    if k < 1:
        raise ContractViolation("K must be at least 1, got {}.".format(k))
    sampler = sampler or UniformSampler()
    drawn = [sampler.sample(memory, batch_size, rng) for _ in range(k)]
    return [b for b, _ in drawn], [meta for _, meta in drawn]


def select_actor_batch(
    memory,
    actor,
    k,
    batch_size,
    reference,
    rng,
    mode=KlMode.full,
    jitter=DEFAULT_JITTER,
):
    """
    Draw ``k`` uniform candidates and return the most on-policy one.

    Candidate batches never touch stored priorities.

    Returns
    -------
    tuple
        ``(chosen Batch, CandidateSet)``
    """
    batches, metas = draw_candidates(memory, k, batch_size, rng)
    candidates = score_candidates(actor, batches, reference, mode, jitter, metas)
    log.debug("Selected actor batch %r", candidates)
    return candidates.chosen_batch, candidates
