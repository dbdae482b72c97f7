# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

from pqkd import (
    EveKind,
    EveStrategy,
    NoiseModel,
    PatternSet,
    SessionConfig,
)


class FakeSession:
    # Every pair of patterns drawn from these sets differs by a
    # permutation that preserves none of the code's stabilizers, so a
    # wrong-pattern decode flips the bit with probability 5/8.
    SECRET_SET = '12345,12453'
    ONE_SHARED_SET = '12345,23514'
    NONE_SHARED_SET = '23514,34125'
    # The two members differ by a permutation that keeps exactly one
    # position's neighbours adjacent, so a wrong-pattern decode is an
    # unbiased coin.
    HALF_FLIP_SET = '12345,13452'

    BLOCKS = 10000

    @classmethod
    def generate_data(cls):
        return dict(
            num_blocks='400',
            secret_set=cls.SECRET_SET,
            test_fraction='0.5',
            mqer_threshold='0.1',
            master_seed='7',
        )

    @classmethod
    def config(cls, num_blocks=400, eve=None, guessed_set=None,
               secret_set=None, **kwargs):
        """Session config; ``eve`` is ``None`` or a strategy kind."""
        if eve is not None:
            if guessed_set is not None:
                guessed_set = PatternSet.parse(guessed_set)
            kwargs['eve'] = EveStrategy(kind=EveKind(eve),
                                        guessed_set=guessed_set)
        noise = {key: kwargs.pop(key) for key in list(kwargs)
                 if key in ('per_qubit_flip_prob', 'distance_km',
                            'loss_db_per_km', 'mean_photon_number')}
        if noise:
            kwargs['noise'] = NoiseModel(**noise)
        kwargs.setdefault('master_seed', 7)
        secret_set = PatternSet.parse(secret_set or cls.SECRET_SET)
        return SessionConfig(num_blocks=num_blocks, secret_set=secret_set,
                             **kwargs)
