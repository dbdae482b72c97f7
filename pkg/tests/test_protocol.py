# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

import math
from dataclasses import replace

import pytest
from scipy import stats

from pqkd import (
    ALICE,
    BOB,
    TRIVIAL_SYNDROME,
    BlockRecord,
    Decision,
    NoiseModel,
    PatternSet,
    SessionConfig,
    SessionConfigError,
    block_streams,
    decide,
    estimate_mqer,
    eve_success_probability,
    guessed_set_with_overlap,
    intercept_resend_model,
    run_block,
    run_session,
    sift,
    stream,
)
from .asserts import assert_within_sigma
from .fixtures import FakeSession


def _record(block_id, alice_bit=0, bob_bit=0, lost=False, same=True):
    return BlockRecord(
        block_id=block_id,
        alice_bit=alice_bit,
        alice_pattern_index=0,
        bob_pattern_index=0 if same else 1,
        lost=lost,
        syndrome=None if lost else TRIVIAL_SYNDROME,
        bob_bit=None if lost else bob_bit,
    )


class TestSessionConfig:

    def test_defaults(self):
        config = FakeSession.config()
        assert config.test_fraction == 0.5
        assert config.mqer_threshold == 0.10
        assert config.noise == NoiseModel()
        assert not config.eve.active
        assert config.logical_basis == 'Z'

    @pytest.mark.parametrize(
        'changes,field',
        [(dict(num_blocks=0), 'num_blocks'),
         (dict(num_blocks=True), 'num_blocks'),
         (dict(num_blocks=2.5), 'num_blocks'),
         (dict(test_fraction=0), 'test_fraction'),
         (dict(test_fraction=1), 'test_fraction'),
         (dict(mqer_threshold=1.5), 'mqer_threshold'),
         (dict(master_seed=-1), 'master_seed'),
         (dict(master_seed=2 ** 64), 'master_seed'),
         (dict(logical_basis='Y'), 'logical_basis'),
         (dict(secret_set='12345,12453'), 'secret_set')],
    )
    def test_invalid(self, changes, field):
        config = FakeSession.config()
        with pytest.raises(SessionConfigError) as excinfo:
            replace(config, **changes)
        assert excinfo.value.field == field

    def test_largest_seed(self):
        config = FakeSession.config(master_seed=2 ** 64 - 1)
        assert config.master_seed == 2 ** 64 - 1


class TestStreams:

    def test_reproducible(self):
        a = stream(7, ALICE, 3).integers(1 << 30, size=4)
        b = stream(7, ALICE, 3).integers(1 << 30, size=4)
        assert list(a) == list(b)

    def test_independent(self):
        draws = {
            tuple(stream(7, channel, block).integers(1 << 30, size=4))
            for channel in (ALICE, BOB) for block in (0, 1)
        }
        assert len(draws) == 4

    def test_block_streams(self):
        streams = block_streams(7, 0)
        assert streams.alice.integers(1 << 30) == \
            stream(7, ALICE, 0).integers(1 << 30)


class TestRunBlock:

    def test_deterministic(self):
        config = FakeSession.config(eve='intercept_resend',
                                    per_qubit_flip_prob=0.1)
        for block_id in range(20):
            assert run_block(config, block_id) == run_block(config, block_id)

    def test_noiseless_sifted_block(self):
        config = FakeSession.config()
        sifted = 0
        for block_id in range(40):
            record = run_block(config, block_id)
            assert not record.lost
            assert record.eve is None
            if record.sifted:
                sifted += 1
                assert record.bob_bit == record.alice_bit
                assert record.syndrome == TRIVIAL_SYNDROME
        assert sifted > 0

    def test_lost_block(self):
        config = FakeSession.config(eve='intercept_resend', distance_km=1e4)
        record = run_block(config, 0)
        assert record.lost
        assert not record.sifted
        assert record.syndrome is None
        assert record.bob_bit is None
        assert record.eve is None

    def test_single_errors_are_corrected(self):
        config = FakeSession.config(per_qubit_flip_prob=0.2)
        corrected = 0
        for block_id in range(300):
            record = run_block(config, block_id)
            if record.sifted and record.error_weight <= 1:
                assert record.bob_bit == record.alice_bit
                corrected += record.error_weight == 1
        assert corrected > 0

    def test_x_basis(self):
        config = FakeSession.config(logical_basis='X')
        for block_id in range(40):
            record = run_block(config, block_id)
            if record.sifted:
                assert record.bob_bit == record.alice_bit

    def test_photon_counts(self):
        config = FakeSession.config(mean_photon_number=5.0)
        records = [run_block(config, block_id) for block_id in range(20)]
        assert any(record.pns_leak for record in records)
        ideal = FakeSession.config()
        assert not any(run_block(ideal, block_id).pns_leak
                       for block_id in range(20))


class TestSift:

    def test_all_lost(self):
        records = [_record(i, lost=True) for i in range(5)]
        assert sift(records) == []

    def test_idempotent(self):
        records = [_record(0), _record(1, same=False), _record(2),
                   _record(3, lost=True)]
        sifted = sift(records)
        assert [record.block_id for record in sifted] == [0, 2]
        assert sift(sifted) == sifted

    def test_sift_rate(self):
        config = FakeSession.config(num_blocks=2000)
        records = [run_block(config, block_id) for block_id in range(2000)]
        assert_within_sigma(len(sift(records)) / 2000, 0.5, 2000, sigmas=3)


class TestMqer:

    def test_no_sifted_blocks(self, rng):
        with pytest.warns(UserWarning):
            estimate = estimate_mqer([], 0.5, rng)
        assert estimate.mqer == 0
        assert estimate.tested == 0
        assert estimate.undefined

    @pytest.mark.parametrize(
        'size,fraction,tested',
        [(10, 0.3, 3), (10, 0.5, 5), (7, 0.5, 4), (1, 0.1, 1), (3, 0.99, 3)],
    )
    def test_sample_size(self, size, fraction, tested, rng):
        records = [_record(i) for i in range(size)]
        estimate = estimate_mqer(records, fraction, rng)
        assert estimate.tested == tested
        assert sum(r.disclosed_for_test for r in estimate.records) == tested
        assert [r.block_id for r in estimate.records] == list(range(size))

    def test_all_mismatched(self, rng):
        records = [_record(i, alice_bit=1, bob_bit=0) for i in range(8)]
        assert estimate_mqer(records, 0.5, rng).mqer == 1

    def test_no_mismatch(self, rng):
        records = [_record(i) for i in range(8)]
        assert estimate_mqer(records, 0.5, rng).mqer == 0

    @pytest.mark.parametrize('fraction', [0, 1, 1.5])
    def test_invalid_fraction(self, fraction, rng):
        with pytest.raises(ValueError):
            estimate_mqer([_record(0)], fraction, rng)


class TestDecide:

    @pytest.mark.parametrize(
        'mqer,threshold,decision',
        [(0, 0.1, Decision.CONTINUE),
         (0.0999, 0.1, Decision.CONTINUE),
         (0.1, 0.1, Decision.ABORT),
         (0.5, 0.1, Decision.ABORT),
         (0, 0, Decision.ABORT),
         (1, 1, Decision.ABORT)],
    )
    def test_threshold(self, mqer, threshold, decision):
        assert decide(mqer, threshold) is decision

    @pytest.mark.parametrize('mqer,threshold', [(-0.1, 0.1), (0.1, 1.1)])
    def test_invalid(self, mqer, threshold):
        with pytest.raises(ValueError):
            decide(mqer, threshold)


class TestSession:

    def test_accounting(self):
        config = FakeSession.config(num_blocks=300, distance_km=5,
                                    eve='intercept_resend')
        report, records = run_session(config)
        assert [r.block_id for r in records] == list(range(300))
        assert report.blocks_sent == 300
        assert (report.blocks_lost + report.blocks_unsifted
                + report.blocks_sifted) == 300
        assert report.blocks_tested == math.ceil(0.5 * report.blocks_sifted)
        assert len(report.raw_key) == \
            report.blocks_sifted - report.blocks_tested
        assert sum(r.disclosed_for_test for r in records) == \
            report.blocks_tested
        assert not any(r.disclosed_for_test and not r.sifted
                       for r in records)

    def test_reproducible(self):
        config = FakeSession.config(num_blocks=200, eve='intercept_resend',
                                    per_qubit_flip_prob=0.05)
        assert run_session(config) == run_session(config)

    def test_seed_changes_outcome(self):
        first, _ = run_session(FakeSession.config(master_seed=1))
        second, _ = run_session(FakeSession.config(master_seed=2))
        assert first.raw_key != second.raw_key

    def test_workers_do_not_change_results(self):
        config = FakeSession.config(num_blocks=60, eve='intercept_resend')
        assert run_session(config, workers=2) == run_session(config)

    def test_all_blocks_lost(self):
        config = FakeSession.config(num_blocks=20, distance_km=1e4)
        with pytest.warns(UserWarning):
            report, _ = run_session(config)
        assert report.blocks_lost == 20
        assert report.mqer_undefined
        assert report.mqer_estimate == 0
        assert report.raw_key == ()
        assert report.sift_rate == 0

    def test_as_dict(self):
        report, _ = run_session(FakeSession.config(num_blocks=50))
        values = report.as_dict()
        assert values['decision'] == 'continue'
        assert values['raw_key_length'] == len(report.raw_key)
        assert set(values['raw_key']) <= {'0', '1'}
        assert values['eve_success_rate'] is None

    def test_raw_key_is_uniform(self):
        report, _ = run_session(FakeSession.config(num_blocks=2000))
        ones = sum(report.raw_key)
        result = stats.binomtest(ones, len(report.raw_key))
        assert result.pvalue > 0.001


@pytest.mark.slow
class TestInterceptResend:

    blocks = FakeSession.BLOCKS

    def setup_method(self, method):
        self.secret = PatternSet.parse(FakeSession.SECRET_SET)

    def _run(self, guessed_set=None, **kwargs):
        eve = kwargs.pop('eve', 'intercept_resend')
        kwargs.setdefault('num_blocks', self.blocks)
        config = FakeSession.config(eve=eve,
                                    guessed_set=guessed_set, **kwargs)
        return run_session(config)

    def _model(self, guessed_set=None):
        if guessed_set is not None:
            guessed_set = PatternSet.parse(guessed_set)
        return intercept_resend_model(self.secret, guessed_set)

    def test_honest_session(self):
        report, _ = self._run(eve=None)
        assert report.mqer_estimate == 0
        assert report.decision is Decision.CONTINUE
        assert report.raw_key_mismatches == 0
        assert_within_sigma(report.sift_rate, 0.5, self.blocks, sigmas=3)
        assert report.blocks_tested == math.ceil(report.blocks_sifted / 2)

    def test_noisy_honest_session(self):
        report, _ = self._run(eve=None, per_qubit_flip_prob=0.1,
                              num_blocks=4000)
        # Only blocks with two or more errors can be misdecoded.
        tail = float(stats.binom.sf(1, 5, 0.1))
        sigma = math.sqrt(tail * (1 - tail) / report.blocks_tested)
        assert 0 < report.mqer_estimate <= tail + 3 * sigma

    def test_uniform_guess(self):
        report, _ = self._run()
        model = self._model()
        # A fair-coin wrong decode would put the MQER at 119/240.
        assert model.fair_coin_mqer - model.sifted_mqer == \
            pytest.approx(17 / 320)
        assert_within_sigma(report.mqer_estimate, model.sifted_mqer,
                            report.blocks_tested)
        assert_within_sigma(report.eve_success_rate, model.eve_success,
                            self.blocks)
        assert report.decision is Decision.ABORT

    @pytest.mark.parametrize(
        'guess',
        [FakeSession.SECRET_SET, FakeSession.ONE_SHARED_SET,
         FakeSession.NONE_SHARED_SET],
        ids=['both', 'one', 'none']
    )
    def test_guessed_set(self, guess):
        report, _ = self._run(guessed_set=guess)
        model = self._model(guess)
        assert_within_sigma(report.eve_success_rate, model.eve_success,
                            self.blocks)
        assert_within_sigma(report.mqer_estimate, model.sifted_mqer,
                            report.blocks_tested)
        assert report.decision is Decision.ABORT
        assert model.wrong_pattern_flip_rate == pytest.approx(0.625)
        assert model.fair_coin_gap[0] < 0

    def test_unbiased_wrong_decodes_give_fair_coin_success(self):
        secret = PatternSet.parse(FakeSession.HALF_FLIP_SET)
        report, _ = self._run(guessed_set=FakeSession.HALF_FLIP_SET,
                              secret_set=FakeSession.HALF_FLIP_SET)
        model = intercept_resend_model(secret, secret)
        assert model.wrong_pattern_flip_rate == pytest.approx(0.5)
        assert_within_sigma(report.eve_success_rate,
                            float(eve_success_probability(2)), self.blocks,
                            sigmas=3)

    @pytest.mark.parametrize('k', [1, 0])
    def test_fair_coin_deviation_is_explained(self, k):
        secret = PatternSet.parse(FakeSession.HALF_FLIP_SET)
        guess = guessed_set_with_overlap(secret, k)
        report, _ = self._run(guessed_set=str(guess),
                              secret_set=FakeSession.HALF_FLIP_SET)
        model = intercept_resend_model(secret, guess)
        assert_within_sigma(report.eve_success_rate, model.eve_success,
                            self.blocks)

        assert model.match_rate == pytest.approx(k / 4)
        assert model.eve_success == pytest.approx(
            k / 4 + (1 - k / 4) * (1 - model.wrong_pattern_flip_rate))
        fair_coin = float(eve_success_probability(k))
        sigma = model.success_sigma(self.blocks)
        assert abs(report.eve_success_rate - fair_coin) <= 3 * sigma or \
            model.wrong_pattern_flip_rate != pytest.approx(0.5)

    def test_knowledge_raises_success(self):
        rates = [
            self._run(guessed_set=guess, master_seed=21)[0].eve_success_rate
            for guess in (None, FakeSession.ONE_SHARED_SET,
                          FakeSession.SECRET_SET)
        ]
        assert rates == sorted(rates)
        assert len(set(rates)) == 3

    def test_known_set_is_detected_less_often(self):
        known, _ = self._run(guessed_set=FakeSession.SECRET_SET)
        uniform, _ = self._run()
        assert 0 < known.mqer_estimate < uniform.mqer_estimate

    def test_x_basis(self):
        report, _ = self._run(guessed_set=FakeSession.SECRET_SET,
                              logical_basis='X', num_blocks=4000)
        model = intercept_resend_model(self.secret, self.secret, basis='X')
        assert_within_sigma(report.eve_success_rate, model.eve_success,
                            4000)
