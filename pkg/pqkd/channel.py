# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

"""Channel noise, fiber loss, photon statistics and the eavesdropper."""

import logging
from dataclasses import dataclass
from enum import Enum

from .code5 import apply_pauli, decode_block, logical_state
from .patterns import BLOCK_SIZE, PatternSet, all_patterns
from .quantum import apply_permutation

logger = logging.getLogger(__name__)


__all__ = [
    'PNS_LEAK_PULSES', 'ChannelError', 'NoiseModel', 'EveKind',
    'EveStrategy', 'EveRecord', 'apply_depolarizing', 'sample_block_loss',
    'sample_photon_numbers', 'pns_leak_event', 'eve_apply',
]

#: Pulses of a block that must carry two or more photons for a PNS leak.
PNS_LEAK_PULSES = 3

DEPOLARIZING_PAULIS = 'XYZ'


class ChannelError(ValueError):
    """Invalid channel or eavesdropper parameter."""

    def __init__(self, field, reason):
        self.field = field
        self.reason = reason
        super().__init__('{}: {}'.format(field, reason))


def _check_probability(field, value):
    if not 0 <= value <= 1:
        raise ChannelError(field, 'expected a probability in [0, 1], '
                                  'got {!r}'.format(value))


@dataclass(frozen=True)
class NoiseModel:

    """Depolarizing strength, fiber attenuation and source statistics.

    ``mean_photon_number`` 0 stands for an ideal single-photon source.
    """

    per_qubit_flip_prob: float = 0.0
    distance_km: float = 0.0
    loss_db_per_km: float = 0.2
    mean_photon_number: float = 0.0

    def __post_init__(self):
        _check_probability('per_qubit_flip_prob', self.per_qubit_flip_prob)
        for field in ('distance_km', 'loss_db_per_km', 'mean_photon_number'):
            value = getattr(self, field)
            if not value >= 0 or value == float('inf'):
                raise ChannelError(
                    field, 'expected a finite value >= 0, got {!r}'.format(
                        value))

    @property
    def photon_survival_prob(self):
        """Per-photon transmittance ``10^(-distance·loss/10)``."""
        return 10 ** (-self.distance_km * self.loss_db_per_km / 10)

    @property
    def block_survival_prob(self):
        return self.photon_survival_prob ** BLOCK_SIZE


class EveKind(Enum):
    NONE = 'none'
    INTERCEPT_RESEND = 'intercept_resend'


@dataclass(frozen=True)
class EveStrategy:

    """What the eavesdropper does and which patterns she tries.

    ``guessed_set`` ``None`` means she picks uniformly among all 120
    patterns; otherwise uniformly among the two members of her guess.
    """

    kind: EveKind = EveKind.NONE
    guessed_set: PatternSet = None

    def __post_init__(self):
        try:
            object.__setattr__(self, 'kind', EveKind(self.kind))
        except ValueError as exc:
            raise ChannelError('eve_kind', str(exc)) from exc
        if (self.guessed_set is not None
                and not isinstance(self.guessed_set, PatternSet)):
            raise ChannelError(
                'eve_knowledge',
                'expected a pattern set, got {!r}'.format(self.guessed_set))

    @property
    def active(self):
        return self.kind is not EveKind.NONE

    @property
    def candidates(self):
        if self.guessed_set is None:
            return all_patterns()
        return tuple(self.guessed_set)

    @property
    def knowledge(self):
        return 'uniform' if self.guessed_set is None else str(self.guessed_set)


@dataclass(frozen=True)
class EveRecord:
    guessed_pattern: object
    eve_bit: int
    acted: bool = True


def apply_depolarizing(state, p, rng):
    """Hit each qubit with X, Y or Z (equally likely) with probability ``p``.

    One uniform draw is taken per qubit, plus a Pauli draw for each hit.

    :returns: ``(state, number of qubits hit)``
    """
    _check_probability('per_qubit_flip_prob', p)

    weight = 0
    for qubit in range(1, BLOCK_SIZE + 1):
        if rng.random() < p:
            letter = DEPOLARIZING_PAULIS[int(rng.integers(3))]
            state = apply_pauli(state, letter, qubit)
            weight += 1
    return state, weight


def sample_block_loss(model, rng):
    """Whether any of the block's five photons is lost in the fiber."""
    survival = model.photon_survival_prob
    draws = rng.random(BLOCK_SIZE)
    return bool((draws >= survival).any())


def sample_photon_numbers(mu, rng):
    """Poisson photon counts of the block's five pulses."""
    if not mu >= 0:
        raise ChannelError('mean_photon_number',
                           'expected a value >= 0, got {!r}'.format(mu))
    return tuple(int(count) for count in rng.poisson(mu, BLOCK_SIZE))


def pns_leak_event(photon_counts):
    """At least three pulses carry a photon Eve could split off."""
    return sum(1 for count in photon_counts if count >= 2) >= PNS_LEAK_PULSES


def eve_apply(strategy, state, rng, basis='Z'):
    """Intercept and resend the block, if Eve is present.

    Eve decodes with a pattern drawn from her candidates and re-encodes
    her bit with the same pattern.

    :returns: ``(state, EveRecord or None)``
    """
    if not strategy.active:
        return state, None

    candidates = strategy.candidates
    guess = candidates[int(rng.integers(len(candidates)))]
    eve_bit, _ = decode_block(state, guess, rng, basis)
    resent = apply_permutation(logical_state(eve_bit, basis), guess)
    return resent, EveRecord(guessed_pattern=guess, eve_bit=eve_bit)
