# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

"""Block transmission, sifting, MQER estimation and the abort decision.

Every block draws from its own random streams derived from the master
seed and the block id, so a session is reproducible whatever the order
or the process its blocks run in.
"""

import logging
import math
import multiprocessing
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from .channel import (
    EveStrategy,
    NoiseModel,
    apply_depolarizing,
    eve_apply,
    pns_leak_event,
    sample_block_loss,
    sample_photon_numbers,
)
from .code5 import BASES, decode_block, logical_state
from .patterns import PatternSet, sample_pattern
from .quantum import apply_permutation

logger = logging.getLogger(__name__)


__all__ = [
    'ALICE', 'EVE', 'CHANNEL', 'BOB', 'TEST', 'MAX_SEED',
    'SessionConfigError', 'SessionConfig', 'Decision', 'BlockRecord',
    'SessionReport', 'MqerEstimate', 'BlockStreams', 'stream',
    'block_streams', 'run_block', 'sift', 'estimate_mqer', 'decide',
    'run_session',
]

# Stream channels, combined with the block id into the spawn key.
ALICE, EVE, CHANNEL, BOB, TEST = range(5)

MAX_SEED = 2 ** 64 - 1


class SessionConfigError(ValueError):
    """A session parameter violates its invariant."""

    def __init__(self, field, reason):
        self.field = field
        self.reason = reason
        super().__init__('{}: {}'.format(field, reason))


@dataclass(frozen=True)
class SessionConfig:

    """Everything that determines a session, seed included."""

    num_blocks: int
    secret_set: PatternSet
    test_fraction: float = 0.5
    mqer_threshold: float = 0.10
    noise: NoiseModel = field(default_factory=NoiseModel)
    eve: EveStrategy = field(default_factory=EveStrategy)
    master_seed: int = 0
    logical_basis: str = 'Z'

    def __post_init__(self):
        if isinstance(self.num_blocks, bool) or not isinstance(
                self.num_blocks, int) or self.num_blocks < 1:
            raise SessionConfigError(
                'num_blocks',
                'expected an integer >= 1, got {!r}'.format(self.num_blocks))
        if not isinstance(self.secret_set, PatternSet):
            raise SessionConfigError(
                'secret_set',
                'expected a pattern set, got {!r}'.format(self.secret_set))
        if not 0 < self.test_fraction < 1:
            raise SessionConfigError(
                'test_fraction',
                'expected a fraction strictly inside (0, 1), got {!r}'.format(
                    self.test_fraction))
        if not 0 <= self.mqer_threshold <= 1:
            raise SessionConfigError(
                'mqer_threshold',
                'expected a fraction in [0, 1], got {!r}'.format(
                    self.mqer_threshold))
        if not isinstance(self.master_seed, int) or not (
                0 <= self.master_seed <= MAX_SEED):
            raise SessionConfigError(
                'master_seed',
                'expected an unsigned 64-bit integer, got {!r}'.format(
                    self.master_seed))
        if self.logical_basis not in BASES:
            raise SessionConfigError(
                'logical_basis',
                'expected one of {}, got {!r}'.format(
                    ', '.join(BASES), self.logical_basis))


class Decision(Enum):
    CONTINUE = 'continue'
    ABORT = 'abort'


@dataclass(frozen=True)
class BlockRecord:

    """Outcome of one block.

    Lost blocks carry no syndrome, Bob bit or Eve record.
    """

    block_id: int
    alice_bit: int
    alice_pattern_index: int
    bob_pattern_index: int
    lost: bool
    syndrome: object = None
    bob_bit: int = None
    eve: object = None
    disclosed_for_test: bool = False
    error_weight: int = 0
    pns_leak: bool = False

    @property
    def sifted(self):
        return (not self.lost
                and self.alice_pattern_index == self.bob_pattern_index)

    @property
    def mismatch(self):
        return self.bob_bit is not None and self.bob_bit != self.alice_bit


@dataclass(frozen=True)
class SessionReport:
    blocks_sent: int
    blocks_lost: int
    blocks_unsifted: int
    blocks_sifted: int
    blocks_tested: int
    mqer_estimate: float
    mqer_undefined: bool
    decision: Decision
    raw_key: tuple
    raw_key_mismatches: int
    eve_success_rate: float
    sift_rate: float
    pns_leak_blocks: int

    def as_dict(self):
        """Flat mapping in report order; the raw key as a bit string."""
        return {
            'blocks_sent': self.blocks_sent,
            'blocks_lost': self.blocks_lost,
            'blocks_unsifted': self.blocks_unsifted,
            'blocks_sifted': self.blocks_sifted,
            'blocks_tested': self.blocks_tested,
            'mqer_estimate': self.mqer_estimate,
            'mqer_undefined': self.mqer_undefined,
            'decision': self.decision.value,
            'sift_rate': self.sift_rate,
            'eve_success_rate': self.eve_success_rate,
            'pns_leak_blocks': self.pns_leak_blocks,
            'raw_key_length': len(self.raw_key),
            'raw_key_mismatches': self.raw_key_mismatches,
            'raw_key': ''.join(str(bit) for bit in self.raw_key),
        }


class MqerEstimate(NamedTuple):
    mqer: float
    tested: int
    records: list
    undefined: bool


class BlockStreams(NamedTuple):
    alice: np.random.Generator
    eve: np.random.Generator
    channel: np.random.Generator
    bob: np.random.Generator


def stream(master_seed, channel, block_id=0):
    """Independent generator for one party of one block."""
    seed = np.random.SeedSequence(master_seed, spawn_key=(channel, block_id))
    return np.random.default_rng(seed)


def block_streams(master_seed, block_id):
    return BlockStreams(
        alice=stream(master_seed, ALICE, block_id),
        eve=stream(master_seed, EVE, block_id),
        channel=stream(master_seed, CHANNEL, block_id),
        bob=stream(master_seed, BOB, block_id),
    )


def run_block(config, block_id, streams=None):
    """Send one block from Alice to Bob.

    Order: Alice encodes, Eve acts, depolarizing noise, fiber loss,
    photon counts (only with a weak coherent source), Bob decodes with
    his own pick from the secret set.
    """
    if streams is None:
        streams = block_streams(config.master_seed, block_id)
    basis = config.logical_basis
    noise = config.noise

    alice_bit = int(streams.alice.integers(2))
    alice_index, alice_pattern = sample_pattern(config.secret_set,
                                                streams.alice)
    state = apply_permutation(logical_state(alice_bit, basis), alice_pattern)

    state, eve = eve_apply(config.eve, state, streams.eve, basis)
    state, weight = apply_depolarizing(state, noise.per_qubit_flip_prob,
                                       streams.channel)
    lost = sample_block_loss(noise, streams.channel)

    pns_leak = False
    if noise.mean_photon_number > 0:
        counts = sample_photon_numbers(noise.mean_photon_number,
                                       streams.channel)
        pns_leak = pns_leak_event(counts)

    bob_index, bob_pattern = sample_pattern(config.secret_set, streams.bob)
    if lost:
        logger.debug('Block %d lost', block_id)
        return BlockRecord(
            block_id=block_id,
            alice_bit=alice_bit,
            alice_pattern_index=alice_index,
            bob_pattern_index=bob_index,
            lost=True,
            error_weight=weight,
            pns_leak=pns_leak,
        )

    bob_bit, syndrome = decode_block(state, bob_pattern, streams.bob, basis)
    return BlockRecord(
        block_id=block_id,
        alice_bit=alice_bit,
        alice_pattern_index=alice_index,
        bob_pattern_index=bob_index,
        lost=False,
        syndrome=syndrome,
        bob_bit=bob_bit,
        eve=eve,
        error_weight=weight,
        pns_leak=pns_leak,
    )


def sift(records):
    """Keep the blocks where Bob used Alice's pattern, in order."""
    return [record for record in records if record.sifted]


def estimate_mqer(sifted, test_fraction, rng):
    """Disclose a random subset of sifted blocks and count mismatches.

    ``ceil(test_fraction * len(sifted))`` records are drawn without
    replacement; the returned records have ``disclosed_for_test`` set on
    the drawn ones.
    """
    if not 0 < test_fraction < 1:
        raise ValueError(
            'test_fraction must be strictly inside (0, 1), got {!r}'.format(
                test_fraction))

    sifted = list(sifted)
    if not sifted:
        warnings.warn('No sifted blocks to estimate the MQER from; '
                      'reporting 0', stacklevel=2)
        return MqerEstimate(mqer=0.0, tested=0, records=[], undefined=True)

    # Rounding keeps e.g. 0.3 * 10 from becoming 4.
    size = math.ceil(round(test_fraction * len(sifted), 9))
    chosen = set(int(index) for index in
                 rng.choice(len(sifted), size=size, replace=False))

    marked = [
        replace(record, disclosed_for_test=True) if index in chosen
        else record
        for index, record in enumerate(sifted)
    ]
    mismatches = sum(1 for record in marked
                     if record.disclosed_for_test and record.mismatch)
    return MqerEstimate(mqer=mismatches / size, tested=size, records=marked,
                        undefined=False)


def decide(mqer, threshold):
    """Continue only when the MQER is strictly below the threshold."""
    for name, value in (('mqer', mqer), ('threshold', threshold)):
        if not 0 <= value <= 1:
            raise ValueError(
                '{} must be in [0, 1], got {!r}'.format(name, value))
    return Decision.CONTINUE if mqer < threshold else Decision.ABORT


def _run_blocks(config, workers):
    arguments = [(config, block_id) for block_id in range(config.num_blocks)]
    if workers <= 1:
        return [run_block(*args) for args in arguments]

    chunksize = max(1, config.num_blocks // (workers * 8))
    with multiprocessing.Pool(workers) as pool:
        return pool.starmap(run_block, arguments, chunksize=chunksize)


def run_session(config, workers=1):
    """Run every block, sift, test, decide and assemble the raw key.

    :returns: ``(SessionReport, records sorted by block id)``
    """
    logger.info('Running %d blocks with %s (seed %d, %d worker(s))',
                config.num_blocks, config.secret_set, config.master_seed,
                workers)
    records = sorted(_run_blocks(config, workers),
                     key=lambda record: record.block_id)

    estimate = estimate_mqer(sift(records), config.test_fraction,
                             stream(config.master_seed, TEST))
    disclosed = {record.block_id: record for record in estimate.records}
    records = [disclosed.get(record.block_id, record) for record in records]

    delivered = [record for record in records if not record.lost]
    kept = [record for record in records
            if record.sifted and not record.disclosed_for_test]

    eve_success_rate = None
    if config.eve.active and delivered:
        hits = sum(1 for record in delivered
                   if record.eve.eve_bit == record.alice_bit)
        eve_success_rate = hits / len(delivered)

    blocks_sifted = len(estimate.records)
    decision = decide(estimate.mqer, config.mqer_threshold)
    report = SessionReport(
        blocks_sent=len(records),
        blocks_lost=len(records) - len(delivered),
        blocks_unsifted=len(delivered) - blocks_sifted,
        blocks_sifted=blocks_sifted,
        blocks_tested=estimate.tested,
        mqer_estimate=estimate.mqer,
        mqer_undefined=estimate.undefined,
        decision=decision,
        raw_key=tuple(record.alice_bit for record in kept),
        raw_key_mismatches=sum(1 for record in kept if record.mismatch),
        eve_success_rate=eve_success_rate,
        sift_rate=blocks_sifted / len(delivered) if delivered else 0.0,
        pns_leak_blocks=sum(1 for record in records if record.pns_leak),
    )
    logger.info('Session %s: mqer=%.4f over %d tested block(s)',
                decision.value, estimate.mqer, estimate.tested)
    return report, records
