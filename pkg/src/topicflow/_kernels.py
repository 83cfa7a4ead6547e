"""Numba kernels for the collapsed direct-assignment Gibbs sampler.

All randomness flows through numba's internal MT19937 state, seeded once
per chain via :func:`seed_rng`, which makes a fit a pure function of
(data, config) regardless of when or where it runs. Kernels must not be
called concurrently from multiple threads of one process; process-level
parallelism is safe.

State layout (``Kmax`` topic slots, slot reuse, ``hw`` = high-water mark):
    words, doc_of : int32[N]     token word ids / owning document
    z             : int32[N]     per-token topic slot
    n_dk          : int64[D, Kmax]
    n_kw          : int64[Kmax, V]
    n_k           : int64[Kmax]
    beta          : float64[Kmax + 1], beta[Kmax] is the unbroken stick rest
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def seed_rng(seed32):
    np.random.seed(seed32)


@njit(cache=True)
def _spawn_slot(n_k, beta, gamma, hw):
    """Claim a free slot for a new topic and stick-break its weight."""
    kmax = n_k.shape[0]
    k_new = -1
    for k in range(hw):
        if n_k[k] == 0:
            k_new = k
            break
    if k_new == -1:
        if hw == kmax:
            raise RuntimeError("topic slot capacity exceeded")
        k_new = hw
        hw += 1
    b = np.random.beta(1.0, gamma)
    beta[k_new] = b * beta[kmax]
    beta[kmax] = (1.0 - b) * beta[kmax]
    return k_new, hw


@njit(cache=True)
def _sample_slot(d, w, n_dk, n_kw, n_k, beta, alpha, eta, v_eta, inv_v, hw, probs):
    """Draw a topic slot for one token; returns -1 for "open a new topic"."""
    total = 0.0
    for k in range(hw):
        if n_k[k] > 0:
            p = (n_dk[d, k] + alpha * beta[k]) * (n_kw[k, w] + eta) / (n_k[k] + v_eta)
        else:
            p = 0.0
        probs[k] = p
        total += p
    kmax = n_k.shape[0]
    p_new = alpha * beta[kmax] * inv_v
    u = np.random.random() * (total + p_new)
    acc = 0.0
    for k in range(hw):
        acc += probs[k]
        if u < acc:
            return k
    return -1


@njit(cache=True)
def gibbs_sweep(words, doc_of, z, n_dk, n_kw, n_k, beta, alpha, eta, gamma, hw):
    """One full pass reassigning every token from its conditional.

    Tokens are visited in a fresh random order each sweep (random scan),
    which mixes duplicate-topic states far better than a systematic scan.
    """
    v = n_kw.shape[1]
    kmax = n_k.shape[0]
    v_eta = v * eta
    inv_v = 1.0 / v
    probs = np.empty(kmax)
    order = np.random.permutation(words.shape[0])
    for pos in range(order.shape[0]):
        i = order[pos]
        d = doc_of[i]
        w = words[i]
        k_old = z[i]
        n_dk[d, k_old] -= 1
        n_kw[k_old, w] -= 1
        n_k[k_old] -= 1
        if n_k[k_old] == 0:
            beta[kmax] += beta[k_old]
            beta[k_old] = 0.0
        k = _sample_slot(d, w, n_dk, n_kw, n_k, beta, alpha, eta, v_eta, inv_v, hw, probs)
        if k == -1:
            k, hw = _spawn_slot(n_k, beta, gamma, hw)
        z[i] = k
        n_dk[d, k] += 1
        n_kw[k, w] += 1
        n_k[k] += 1
    return hw


@njit(cache=True)
def resample_beta(n_dk, n_k, beta, alpha, gamma, hw):
    """Resample global topic weights from their table-count conditional.

    Table counts are drawn per (document, topic) from the Antoniak
    distribution via a Bernoulli sum; the weight vector over active
    topics plus the rest mass is then Dirichlet. Returns the total table
    count (needed by the concentration updates).
    """
    kmax = n_k.shape[0]
    m_k = np.zeros(hw)
    for d in range(n_dk.shape[0]):
        for k in range(hw):
            n = n_dk[d, k]
            if n > 0:
                a = alpha * beta[k]
                m = 1  # first customer always opens a table
                for i in range(2, n + 1):
                    if np.random.random() * (a + i - 1.0) < a:
                        m += 1
                m_k[k] += m
    total = 0.0
    m_total = 0.0
    draws = np.zeros(hw)
    for k in range(hw):
        if n_k[k] > 0:
            draws[k] = np.random.gamma(m_k[k], 1.0)
            total += draws[k]
            m_total += m_k[k]
    rest = np.random.gamma(gamma, 1.0)
    total += rest
    for k in range(hw):
        beta[k] = draws[k] / total if n_k[k] > 0 else 0.0
    for k in range(hw, kmax):
        beta[k] = 0.0
    beta[kmax] = rest / total
    return m_total


@njit(cache=True)
def resample_concentrations(
    doc_tokens, n_k, m_total, alpha, gamma, prior_shape, prior_rate, hw
):
    """Vague-Gamma auxiliary-variable updates for both concentrations."""
    # Document-level concentration: auxiliary (w_j, s_j) per document.
    shape = prior_shape + m_total
    rate = prior_rate
    for j in range(doc_tokens.shape[0]):
        nj = doc_tokens[j]
        if nj > 0:
            wj = np.random.beta(alpha + 1.0, nj)
            rate -= math.log(wj)
            if np.random.random() * (nj + alpha) < nj:
                shape -= 1.0
    new_alpha = np.random.gamma(shape, 1.0 / rate)

    # Corpus-level concentration from (#topics, total tables).
    k_active = 0
    for k in range(hw):
        if n_k[k] > 0:
            k_active += 1
    w = np.random.beta(gamma + 1.0, m_total)
    shape_g = prior_shape + k_active
    if np.random.random() * (m_total + gamma) < m_total:
        shape_g -= 1.0
    new_gamma = np.random.gamma(shape_g, 1.0 / (prior_rate - math.log(w)))
    return new_alpha, new_gamma


@njit(cache=True)
def collapsed_log_likelihood(n_kw, n_k, eta, hw):
    """Joint log probability of the words given assignments, topics collapsed."""
    v = n_kw.shape[1]
    lg_v_eta = math.lgamma(v * eta)
    lg_eta = math.lgamma(eta)
    ll = 0.0
    for k in range(hw):
        if n_k[k] > 0:
            ll += lg_v_eta - math.lgamma(n_k[k] + v * eta)
            for w in range(v):
                c = n_kw[k, w]
                if c > 0:
                    ll += math.lgamma(c + eta) - lg_eta
    return ll


@njit(cache=True)
def constrained_sweep(words, doc_of, z, n_dk, n_kw, n_k, beta, keep, alpha, eta, hw):
    """Reassign tokens of non-kept topics, restricted to kept topics."""
    v = n_kw.shape[1]
    v_eta = v * eta
    probs = np.empty(hw if hw > 0 else 1)
    for i in range(words.shape[0]):
        k_old = z[i]
        if keep[k_old]:
            continue
        d = doc_of[i]
        w = words[i]
        n_dk[d, k_old] -= 1
        n_kw[k_old, w] -= 1
        n_k[k_old] -= 1
        total = 0.0
        for k in range(hw):
            if keep[k]:
                p = (n_dk[d, k] + alpha * beta[k]) * (n_kw[k, w] + eta) / (n_k[k] + v_eta)
            else:
                p = 0.0
            probs[k] = p
            total += p
        u = np.random.random() * total
        acc = 0.0
        k_new = -1
        for k in range(hw):
            acc += probs[k]
            if u < acc:
                k_new = k
                break
        if k_new == -1:  # numerical corner: give it to the last kept slot
            for k in range(hw - 1, -1, -1):
                if keep[k]:
                    k_new = k
                    break
        z[i] = k_new
        n_dk[d, k_new] += 1
        n_kw[k_new, w] += 1
        n_k[k_new] += 1
