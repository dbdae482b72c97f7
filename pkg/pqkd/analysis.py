# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

"""Closed-form and exact security quantities.

Combinatorial probabilities are exact :class:`fractions.Fraction`
values; entropies and photon statistics are floats.
"""

import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy import stats

from .channel import PNS_LEAK_PULSES
from .code5 import decode_distribution, encode_logical, logical_state
from .patterns import (
    BLOCK_SIZE,
    IDENTITY,
    NUM_PATTERN_SETS,
    PatternError,
    all_patterns,
    partners,
    pattern_set_id,
    valid_pattern_sets,
)
from .quantum import (
    DensityMatrix,
    apply_permutation,
    density_from_ensemble,
    inner_product,
    jacobi_eigenvalues,
    mix_densities,
    von_neumann_entropy,
)

logger = logging.getLogger(__name__)


__all__ = [
    'HOLEVO_METHODS', 'GuessOutcomeDistribution', 'HolevoTerms',
    'HolevoReport', 'ChiRow', 'InterceptResendModel',
    'binary_entropy', 'intercept_resend_mutual_info',
    'guess_outcome_distribution', 'eve_success_probability',
    'pattern_codeword', 'holevo_terms', 'gram_entropy',
    'naive_model_terms', 'holevo_naive_model', 'physical_model_terms',
    'holevo_physical_model', 'holevo_sweep',
    'poisson_pmf', 'multiphoton_prob', 'pns_block_leak_prob',
    'wrong_decode_flip_probability', 'code_automorphisms',
    'intercept_resend_model', 'guessed_set_with_overlap',
]

HOLEVO_METHODS = ('jacobi', 'gram')


def _check_probability(name, value):
    if not 0 <= value <= 1:
        raise ValueError(
            '{} must be in [0, 1], got {!r}'.format(name, value))


def _check_mean(mu):
    if not mu >= 0 or math.isinf(mu):
        raise ValueError(
            'Mean photon number must be finite and >= 0, got {!r}'.format(mu))


def binary_entropy(p):
    """``h(p)`` in bits, with ``h(0) = h(1) = 0``."""
    _check_probability('p', p)
    if p in (0, 1):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def intercept_resend_mutual_info(success):
    """Information Eve's guess carries about Alice's bit, ``1 - h(p)``."""
    return 1 - binary_entropy(success)


class GuessOutcomeDistribution(NamedTuple):
    p_both: Fraction
    p_one: Fraction
    p_none: Fraction


@functools.lru_cache(maxsize=None)
def _degree(pattern):
    return len(partners(pattern))


def guess_outcome_distribution(true_set=None, exhaustive=False):
    """How many patterns of ``true_set`` a uniformly guessed set shares.

    ``true_set`` defaults to the first valid set. With ``exhaustive``
    every valid set is compared; otherwise the counts come from the
    number of partners of each true pattern.
    """
    if true_set is None:
        true_set = valid_pattern_sets()[0]

    if exhaustive:
        counts = [0, 0, 0]
        for guessed in valid_pattern_sets():
            counts[true_set.shared_with(guessed)] += 1
        none, one, both = counts
    else:
        both = 1
        one = sum(_degree(pattern) - 1 for pattern in true_set)
        none = NUM_PATTERN_SETS - one - both

    return GuessOutcomeDistribution(
        p_both=Fraction(both, NUM_PATTERN_SETS),
        p_one=Fraction(one, NUM_PATTERN_SETS),
        p_none=Fraction(none, NUM_PATTERN_SETS),
    )


def eve_success_probability(correct_patterns_in_guess):
    """``1/2 + k/8``, assuming a wrong-pattern decode is a fair coin.

    Eve's per-block pick matches Alice's with probability ``k/4``.
    """
    k = correct_patterns_in_guess
    if k not in (0, 1, 2):
        raise ValueError(
            'Expected 0, 1 or 2 correct patterns, got {!r}'.format(k))
    match = Fraction(k, 4)
    return match + (1 - match) * Fraction(1, 2)


@functools.lru_cache(maxsize=None)
def pattern_codeword(pattern, bit):
    """The bit's codeword laid out under ``pattern``."""
    return apply_permutation(encode_logical(bit), pattern)


class HolevoTerms(NamedTuple):
    s_mean: float
    s_zero: float
    s_one: float

    @property
    def chi(self):
        return self.s_mean - (self.s_zero + self.s_one) / 2


def holevo_terms(rho_zero, rho_one):
    """Entropy terms of the equiprobable two-state ensemble."""
    rho_mean = mix_densities([(0.5, rho_zero), (0.5, rho_one)])
    return HolevoTerms(
        s_mean=von_neumann_entropy(rho_mean),
        s_zero=von_neumann_entropy(rho_zero),
        s_one=von_neumann_entropy(rho_one),
    )


def gram_entropy(members):
    """Entropy of ``Σ p_i |ψ_i⟩⟨ψ_i|`` from the members' Gram matrix.

    The matrix ``sqrt(p_i p_j) ⟨ψ_i|ψ_j⟩`` has the same nonzero
    eigenvalues as the density matrix but only one row per member.
    """
    weights = np.sqrt([probability for probability, _ in members])
    states = [state for _, state in members]
    gram = np.array([[inner_product(a, b) for b in states] for a in states])
    eigenvalues = jacobi_eigenvalues(gram * np.outer(weights, weights))
    entropy = -math.fsum(
        value * math.log2(value) for value in eigenvalues if value > 1e-15)
    return max(entropy, 0.0)


def naive_model_terms(pattern_set):
    """Both bits described by the same mixture of pattern states.

    The pattern states are the zero codeword under each member of the
    set, so both conditional states are equal and the Holevo quantity
    vanishes.
    """
    states = [pattern_codeword(pattern, 0) for pattern in pattern_set]
    rho = density_from_ensemble([(0.5, state) for state in states])
    return holevo_terms(rho, rho)


def holevo_naive_model(pattern_set):
    return naive_model_terms(pattern_set).chi


def _bit_members(pattern_set, bit, weight=0.5):
    return [(weight, pattern_codeword(pattern, bit))
            for pattern in pattern_set]


def physical_model_terms(pattern_set, method='jacobi'):
    """Conditional states ``ρ_a = ½ Σ_p π_p |a_L⟩⟨a_L| π_p†``."""
    if method not in HOLEVO_METHODS:
        raise ValueError(
            'Unknown Holevo method {!r}, expected one of {}'.format(
                method, ', '.join(HOLEVO_METHODS)))

    zero_members = _bit_members(pattern_set, 0)
    one_members = _bit_members(pattern_set, 1)
    if method == 'jacobi':
        return holevo_terms(density_from_ensemble(zero_members),
                            density_from_ensemble(one_members))

    mean_members = (_bit_members(pattern_set, 0, 0.25)
                    + _bit_members(pattern_set, 1, 0.25))
    return HolevoTerms(
        s_mean=gram_entropy(mean_members),
        s_zero=gram_entropy(zero_members),
        s_one=gram_entropy(one_members),
    )


@dataclass(frozen=True)
class HolevoReport:
    pattern_set: object
    chi_naive_model: float
    chi_physical_model: float
    s_mean: float
    s_zero: float
    s_one: float
    overlap_00: float
    overlap_01: float


def _overlaps(pattern_set):
    first, second = pattern_set
    return (
        abs(inner_product(pattern_codeword(first, 0),
                          pattern_codeword(second, 0))),
        abs(inner_product(pattern_codeword(first, 0),
                          pattern_codeword(second, 1))),
    )


def holevo_physical_model(pattern_set, method='jacobi'):
    """Holevo quantities of ``pattern_set`` under both readings."""
    terms = physical_model_terms(pattern_set, method)
    overlap_00, overlap_01 = _overlaps(pattern_set)
    return HolevoReport(
        pattern_set=pattern_set,
        chi_naive_model=holevo_naive_model(pattern_set),
        chi_physical_model=terms.chi,
        s_mean=terms.s_mean,
        s_zero=terms.s_zero,
        s_one=terms.s_one,
        overlap_00=overlap_00,
        overlap_01=overlap_01,
    )


class ChiRow(NamedTuple):
    set_id: int
    chi_physical: float
    overlap_00: float
    overlap_01: float


def holevo_sweep(method='gram', pattern_sets=None):
    """Physical Holevo quantity of every valid set, in set id order."""
    if pattern_sets is None:
        pattern_sets = valid_pattern_sets()

    rows = []
    for pattern_set in pattern_sets:
        chi = physical_model_terms(pattern_set, method).chi
        rows.append(ChiRow(pattern_set_id(pattern_set), chi,
                           *_overlaps(pattern_set)))
    rows.sort(key=lambda row: row.set_id)
    logger.debug('Computed the physical Holevo quantity of %d set(s)',
                 len(rows))
    return rows


def poisson_pmf(n, mu):
    """Probability of ``n`` photons in a pulse of mean ``mu``."""
    _check_mean(mu)
    if n < 0:
        raise ValueError('Photon number must be >= 0, got {!r}'.format(n))
    if mu == 0:
        return 1.0 if n == 0 else 0.0
    return float(stats.poisson.pmf(n, mu))


def multiphoton_prob(mu):
    """``P(n >= 2) = 1 - e^-μ (1 + μ)``."""
    _check_mean(mu)
    if mu == 0:
        return 0.0
    return float(stats.poisson.sf(1, mu))


def pns_block_leak_prob(mu):
    """Probability that three or more pulses of a block are multiphoton."""
    q = multiphoton_prob(mu)
    return float(stats.binom.sf(PNS_LEAK_PULSES - 1, BLOCK_SIZE, q))


@functools.lru_cache(maxsize=None)
def wrong_decode_flip_probability(encode_pattern, decode_pattern, bit=0,
                                  basis='Z'):
    """Exact probability that decoding flips the encoded bit.

    The block carries ``bit``'s logical state laid out under
    ``encode_pattern`` and is decoded with ``decode_pattern``.
    """
    state = apply_permutation(logical_state(bit, basis), encode_pattern)
    distribution = decode_distribution(state, decode_pattern, basis)
    return math.fsum(probability
                     for (decoded, _), probability in distribution.items()
                     if decoded != bit)


@functools.lru_cache(maxsize=None)
def code_automorphisms():
    """Position permutations that map the code space onto itself.

    A block encoded with ``p`` decodes exactly with ``p∘a`` for each
    returned ``a``.
    """
    automorphisms = []
    for pattern in all_patterns():
        trivial = 0.0
        for bit in (0, 1):
            distribution = decode_distribution(
                pattern_codeword(pattern, bit), IDENTITY)
            trivial += math.fsum(
                probability for (_, syndrome), probability
                in distribution.items() if syndrome.is_trivial())
        if trivial > 2 - 1e-9:
            automorphisms.append(pattern)
    return tuple(automorphisms)


@dataclass(frozen=True)
class InterceptResendModel:

    """Exact intercept-resend statistics on a noiseless channel.

    ``wrong_pattern_flip_rate`` is the mean probability that Eve reads
    the complement of Alice's bit when her pattern differs from Alice's,
    and ``match_rate`` the probability that her pattern is Alice's. The
    ``fair_coin_*`` properties give the same quantities if every
    wrong-pattern decode were an unbiased coin, as
    :func:`eve_success_probability` assumes.
    """

    eve_success: float
    sifted_mqer: float
    wrong_pattern_flip_rate: float
    match_rate: float

    @property
    def fair_coin_success(self):
        return self.match_rate + (1 - self.match_rate) / 2

    @property
    def fair_coin_mqer(self):
        return (1 - self.match_rate) / 2

    @property
    def fair_coin_gap(self):
        """``(success, mqer)`` minus their fair-coin values."""
        return (self.eve_success - self.fair_coin_success,
                self.sifted_mqer - self.fair_coin_mqer)

    def success_sigma(self, blocks):
        """Binomial standard error of a measured success rate."""
        return math.sqrt(self.eve_success * (1 - self.eve_success) / blocks)

    def mqer_sigma(self, blocks):
        return math.sqrt(self.sifted_mqer * (1 - self.sifted_mqer) / blocks)


def intercept_resend_model(secret_set, eve_patterns=None, basis='Z'):
    """Average Eve and Bob outcomes over Alice's bit, pattern and Eve's pick.

    ``eve_patterns`` defaults to all 120 patterns. Bob decodes with
    Alice's pattern, so ``sifted_mqer`` is the mismatch rate of sifted
    blocks.
    """
    if eve_patterns is None:
        eve_patterns = all_patterns()
    eve_patterns = tuple(eve_patterns)

    success = []
    mismatch = []
    wrong_flips = []
    matches = 0
    for bit in (0, 1):
        for alice_pattern in secret_set:
            for guess in eve_patterns:
                eve_flip = wrong_decode_flip_probability(
                    alice_pattern, guess, bit, basis)
                bob_flips = wrong_decode_flip_probability(
                    guess, alice_pattern, bit, basis)
                bob_repeats_eve = 1 - wrong_decode_flip_probability(
                    guess, alice_pattern, 1 - bit, basis)

                success.append(1 - eve_flip)
                mismatch.append((1 - eve_flip) * bob_flips
                                + eve_flip * bob_repeats_eve)
                if guess == alice_pattern:
                    matches += 1
                else:
                    wrong_flips.append(eve_flip)

    return InterceptResendModel(
        eve_success=math.fsum(success) / len(success),
        sifted_mqer=math.fsum(mismatch) / len(mismatch),
        wrong_pattern_flip_rate=(math.fsum(wrong_flips) / len(wrong_flips)
                                 if wrong_flips else 0.0),
        match_rate=matches / len(success),
    )


def guessed_set_with_overlap(secret_set, k):
    """First valid set sharing exactly ``k`` patterns with ``secret_set``."""
    if k not in (0, 1, 2):
        raise PatternError('Overlap must be 0, 1 or 2, got {!r}'.format(k))
    for candidate in valid_pattern_sets():
        if candidate.shared_with(secret_set) == k:
            return candidate
    raise PatternError('No valid set shares {} pattern(s) with {}'.format(
        k, secret_set))
