"""Per-epoch topic extraction via a hierarchical Dirichlet process mixture.

Each epoch is fit independently with a collapsed Gibbs sampler in the
direct-assignment scheme: tokens carry topic assignments directly, global
topic weights are resampled from table counts after every sweep, and new
topics open with stick-breaking weight taken from the unbroken rest mass.
All epochs share one configuration — concentrations, the symmetric
Dirichlet base measure over the shared vocabulary — and derive their RNG
seed as ``seed XOR epoch_index``, so a corpus fit is independent of the
order (or machine) in which epochs run.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .corpus import EpochSlice
from .errors import (
    AllBagsEmptyError,
    FitCancelledError,
    InvalidSpecError,
    NoDocumentsError,
)
from .preprocess import BagOfWords

MAX_TOPIC_SLOTS = 256


@dataclass(frozen=True)
class HdpConfig:
    """Sampler hyperparameters shared by every epoch of one analysis.

    ``gamma`` is the corpus-level concentration, ``alpha`` the document
    -level one, and ``eta`` parameterizes the symmetric Dirichlet base
    measure over the vocabulary. Topics whose final token share falls
    below ``min_topic_mass`` are dissolved by a constrained sweep.
    Concentration resampling is available but off by default so that a
    seed pins the entire chain.
    """

    gamma: float = 1.0
    alpha: float = 1.0
    eta: float = 0.01
    iterations: int = 1000
    burn_in: int = 500
    seed: int = 0
    min_topic_mass: float = 0.005
    resample_concentrations: bool = False
    concentration_prior_shape: float = 1.0
    concentration_prior_rate: float = 1.0

    def validate(self) -> None:
        if self.gamma <= 0 or self.alpha <= 0 or self.eta <= 0:
            raise InvalidSpecError("gamma, alpha, eta must all be positive")
        if self.iterations < 1:
            raise InvalidSpecError("iterations must be >= 1")
        if not (0 <= self.burn_in < self.iterations):
            raise InvalidSpecError("burn_in must satisfy 0 <= burn_in < iterations")
        if not (0 <= self.seed < 2**64):
            raise InvalidSpecError("seed must fit in 64 unsigned bits")
        if not (0.0 <= self.min_topic_mass < 1.0):
            raise InvalidSpecError("min_topic_mass must be in [0, 1)")

    def with_seed(self, seed: int) -> "HdpConfig":
        from dataclasses import replace

        return replace(self, seed=seed)

    def to_jsonable(self) -> dict:
        return {
            "gamma": self.gamma,
            "alpha": self.alpha,
            "eta": self.eta,
            "iterations": self.iterations,
            "burn_in": self.burn_in,
            "seed": self.seed,
            "min_topic_mass": self.min_topic_mass,
            "resample_concentrations": self.resample_concentrations,
            "concentration_prior_shape": self.concentration_prior_shape,
            "concentration_prior_rate": self.concentration_prior_rate,
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "HdpConfig":
        return cls(**obj)


@dataclass(frozen=True)
class Topic:
    """A term distribution over the vocabulary with its epoch token share."""

    epoch: int
    id: int
    term_dist: np.ndarray
    mass: float
    token_count: int

    def top_terms(self, n: int) -> list[int]:
        order = np.lexsort((np.arange(self.term_dist.size), -self.term_dist))
        return [int(i) for i in order[:n]]

    def to_jsonable(self) -> dict:
        return {
            "id": self.id,
            "mass": float(self.mass),
            "token_count": int(self.token_count),
            "term_dist": [float(x) for x in self.term_dist],
        }


@dataclass
class EpochModel:
    """Fitted topic set of one epoch.

    ``assignments`` aligns with the input bag list: entry ``d`` holds one
    topic id per token of bag ``d``, tokens expanded in ascending term
    -index order. Assignments exist only on freshly fitted models; they
    are not part of the persisted form.
    """

    epoch: int
    topics: list[Topic]
    log_likelihood_trace: list[float]
    assignments: list[list[int]] | None = None
    eta: float = field(default=0.01, repr=False)

    @property
    def k(self) -> int:
        return len(self.topics)

    def topic_by_id(self, topic_id: int) -> Topic | None:
        for t in self.topics:
            if t.id == topic_id:
                return t
        return None

    def to_jsonable(self) -> dict:
        return {
            "epoch": self.epoch,
            "topics": [t.to_jsonable() for t in self.topics],
            "log_likelihood_trace": [float(x) for x in self.log_likelihood_trace],
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "EpochModel":
        epoch = int(obj["epoch"])
        topics = [
            Topic(
                epoch=epoch,
                id=int(t["id"]),
                term_dist=np.asarray(t["term_dist"], dtype=np.float64),
                mass=float(t["mass"]),
                token_count=int(t["token_count"]),
            )
            for t in obj["topics"]
        ]
        return cls(
            epoch=epoch,
            topics=topics,
            log_likelihood_trace=[float(x) for x in obj["log_likelihood_trace"]],
        )


def expand_bag(bag: BagOfWords) -> list[int]:
    """Token stream of a bag: each term index repeated, ascending order."""
    out: list[int] = []
    for idx in sorted(bag.counts):
        out.extend([idx] * bag.counts[idx])
    return out


def _fold_seed(seed: int) -> int:
    return (seed ^ (seed >> 32)) & 0xFFFFFFFF


def fit_epoch(
    bags: Sequence[BagOfWords],
    vocab_size: int,
    config: HdpConfig,
    epoch: int = 0,
    cancel: Callable[[], bool] | None = None,
) -> EpochModel:
    """Run the collapsed Gibbs chain on one epoch's bags.

    Topics are extracted from the final post-burn-in state: term
    distributions are the posterior mean (token counts + eta,
    normalized), topics below the mass floor are dissolved by one
    constrained sweep over the survivors, and ids are assigned by
    descending mass. The optional ``cancel`` callable is polled between
    sweeps.
    """
    config.validate()
    if vocab_size < 2:
        raise InvalidSpecError("vocab_size must be >= 2")
    if len(bags) == 0:
        raise NoDocumentsError("no bags supplied")
    if all(b.total == 0 for b in bags):
        raise AllBagsEmptyError("every bag is empty")

    words_list: list[int] = []
    doc_of_list: list[int] = []
    fit_docs: list[int] = []  # positions of non-empty bags
    for pos, bag in enumerate(bags):
        if bag.total == 0:
            continue
        stream = expand_bag(bag)
        words_list.extend(stream)
        doc_of_list.extend([len(fit_docs)] * len(stream))
        fit_docs.append(pos)

    words = np.asarray(words_list, dtype=np.int32)
    doc_of = np.asarray(doc_of_list, dtype=np.int32)
    n_tokens = words.size
    n_docs = len(fit_docs)
    kmax = min(n_tokens, MAX_TOPIC_SLOTS)

    n_dk = np.zeros((n_docs, kmax), dtype=np.int64)
    n_kw = np.zeros((kmax, vocab_size), dtype=np.int64)
    n_k = np.zeros(kmax, dtype=np.int64)
    beta = np.zeros(kmax + 1, dtype=np.float64)
    z = np.zeros(n_tokens, dtype=np.int32)
    doc_tokens = np.bincount(doc_of, minlength=n_docs).astype(np.int64)

    # Cold start: every token in one topic (z is already zeros). The chain
    # grows topics as the data demands, which avoids seeding racing
    # duplicates.
    n_dk[:, 0] = doc_tokens
    np.add.at(n_kw[0], words, 1)
    n_k[0] = n_tokens
    beta[kmax] = 1.0
    hw = 1

    alpha, gamma = config.alpha, config.gamma
    _kernels.seed_rng(_fold_seed(config.seed))
    _kernels.resample_beta(n_dk, n_k, beta, alpha, gamma, hw)

    trace: list[float] = []
    for _ in range(config.iterations):
        if cancel is not None and cancel():
            raise FitCancelledError(f"epoch {epoch} fit cancelled")
        hw = _kernels.gibbs_sweep(
            words, doc_of, z, n_dk, n_kw, n_k, beta, alpha, config.eta, gamma, hw
        )
        m_total = _kernels.resample_beta(n_dk, n_k, beta, alpha, gamma, hw)
        if config.resample_concentrations:
            alpha, gamma = _kernels.resample_concentrations(
                doc_tokens,
                n_k,
                m_total,
                alpha,
                gamma,
                config.concentration_prior_shape,
                config.concentration_prior_rate,
                hw,
            )
        trace.append(_kernels.collapsed_log_likelihood(n_kw, n_k, config.eta, hw))

    # Dissolve topics below the mass floor (the largest always survives).
    masses = n_k[:hw] / n_tokens
    keep = np.zeros(kmax, dtype=np.bool_)
    keep[:hw] = (masses >= config.min_topic_mass) & (n_k[:hw] > 0)
    if not keep.any():
        keep[int(np.argmax(n_k[:hw]))] = True
    if np.any((n_k[:hw] > 0) & ~keep[:hw]):
        _kernels.constrained_sweep(
            words, doc_of, z, n_dk, n_kw, n_k, beta, keep, alpha, config.eta, hw
        )

    # Renumber surviving slots by descending token count, slot order on ties.
    slots = [k for k in range(hw) if n_k[k] > 0]
    slots.sort(key=lambda k: (-int(n_k[k]), k))
    slot_to_id = {slot: i for i, slot in enumerate(slots)}

    topics = []
    for slot in slots:
        dist = (n_kw[slot] + config.eta) / (n_k[slot] + vocab_size * config.eta)
        topics.append(
            Topic(
                epoch=epoch,
                id=slot_to_id[slot],
                term_dist=dist,
                mass=float(n_k[slot] / n_tokens),
                token_count=int(n_k[slot]),
            )
        )

    assignments: list[list[int]] = [[] for _ in bags]
    cursor = 0
    for fit_pos, bag_pos in enumerate(fit_docs):
        count = int(doc_tokens[fit_pos])
        assignments[bag_pos] = [slot_to_id[int(s)] for s in z[cursor : cursor + count]]
        cursor += count

    return EpochModel(
        epoch=epoch,
        topics=topics,
        log_likelihood_trace=trace,
        assignments=assignments,
        eta=config.eta,
    )


def _fit_worker(args) -> EpochModel:
    bags, vocab_size, config, epoch = args
    return fit_epoch(bags, vocab_size, config, epoch=epoch)


def fit_corpus(
    epoch_bags: Sequence[tuple[EpochSlice, Sequence[BagOfWords]]],
    vocab_size: int,
    config: HdpConfig,
    jobs: int = 1,
    cancel: Callable[[], bool] | None = None,
) -> list[EpochModel]:
    """Fit every epoch with the shared configuration.

    Epoch ``t`` runs with seed ``config.seed XOR t``, so the result is a
    pure function of (bags, config) and identical whether epochs run
    sequentially, permuted, or in parallel worker processes.
    """
    config.validate()
    indices = [s.index for s, _ in epoch_bags]
    if indices != list(range(len(epoch_bags))):
        raise InvalidSpecError(f"epoch slices must be consecutive from 0, got {indices}")

    tasks = [
        (list(bags), vocab_size, config.with_seed(config.seed ^ s.index), s.index)
        for s, bags in epoch_bags
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_fit_worker, tasks))
    models = []
    for bags, vs, cfg, epoch in tasks:
        try:
            models.append(fit_epoch(bags, vs, cfg, epoch=epoch, cancel=cancel))
        except (NoDocumentsError, AllBagsEmptyError) as exc:
            raise type(exc)(f"epoch {epoch}: {exc}") from exc
    return models


def log_likelihood(bags: Sequence[BagOfWords], model: EpochModel) -> float:
    """Collapsed joint log probability of the fitted token assignments."""
    if model.assignments is None:
        raise InvalidSpecError("model carries no assignments (was it loaded from disk?)")
    vocab_size = int(model.topics[0].term_dist.size)
    k = len(model.topics)
    n_kw = np.zeros((k, vocab_size), dtype=np.int64)
    n_k = np.zeros(k, dtype=np.int64)
    for bag, assign in zip(bags, model.assignments):
        for w, topic_id in zip(expand_bag(bag), assign):
            n_kw[topic_id, w] += 1
            n_k[topic_id] += 1

    eta = model.eta
    ll = 0.0
    for kk in range(k):
        if n_k[kk] == 0:
            continue
        ll += math.lgamma(vocab_size * eta) - math.lgamma(n_k[kk] + vocab_size * eta)
        nz = n_kw[kk][n_kw[kk] > 0]
        ll += float(np.sum([math.lgamma(c + eta) for c in nz])) - nz.size * math.lgamma(eta)
    return ll
