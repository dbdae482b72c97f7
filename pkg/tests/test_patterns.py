# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

import itertools
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from pqkd import (
    IDENTITY,
    NUM_PATTERN_SETS,
    Pattern,
    PatternError,
    PatternSet,
    all_patterns,
    compose,
    invert,
    partners,
    pattern_distance,
    pattern_set_by_id,
    pattern_set_id,
    sample_pattern,
    sample_pattern_set,
    valid_pattern_sets,
)
from .asserts import assert_type_and_value


class TestPattern:

    def test_call_and_str(self):
        p = Pattern((2, 1, 3, 4, 5))
        assert p(1) == 2
        assert p(2) == 1
        assert_type_and_value(str, '21345', str(p))
        assert repr(p) == '<Pattern:21345>'

    @pytest.mark.parametrize(
        'text',
        ['21345', '2 1 3 4 5', '(2,1,3,4,5)', '[2, 1, 3, 4, 5]'],
        ids=['compact', 'spaces', 'parens', 'brackets']
    )
    def test_parse(self, text):
        assert Pattern.parse(text) == Pattern((2, 1, 3, 4, 5))

    @pytest.mark.parametrize(
        'mapping',
        [(1, 1, 3, 4, 5), (1, 2, 3, 4), (0, 1, 2, 3, 4), (1, 2, 3, 4, 6),
         ('a', 2, 3, 4, 5), None],
        ids=['repeat', 'short', 'zero', 'six', 'letter', 'none']
    )
    def test_invalid_mapping(self, mapping):
        with pytest.raises(PatternError):
            Pattern(mapping)

    @pytest.mark.parametrize('text', ['2134x', '', '123456'])
    def test_invalid_text(self, text):
        with pytest.raises(PatternError):
            Pattern.parse(text)

    def test_position_out_of_range(self):
        with pytest.raises(PatternError):
            IDENTITY(6)

    def test_distance(self):
        assert pattern_distance(IDENTITY, IDENTITY) == 0
        assert pattern_distance(IDENTITY, Pattern.parse('21345')) == 2
        assert pattern_distance(IDENTITY, Pattern.parse('23451')) == 5

    def test_no_distance_one(self):
        distances = {
            pattern_distance(p, q)
            for p, q in itertools.product(all_patterns(), repeat=2)
        }
        assert distances == {0, 2, 3, 4, 5}

    @pytest.mark.parametrize(
        'p,q,expected',
        [('21345', '13245', '23145'),
         ('23451', '23451', '34512'),
         ('12345', '54321', '54321')],
    )
    def test_compose(self, p, q, expected):
        composed = compose(Pattern.parse(p), Pattern.parse(q))
        assert composed == Pattern.parse(expected)

    def test_inverse_for_every_pattern(self):
        for p in all_patterns():
            assert compose(p, invert(p)) == IDENTITY
            assert compose(invert(p), p) == IDENTITY
            assert invert(invert(p)) == p


class TestEnumeration:

    def test_all_patterns(self):
        patterns = all_patterns()
        assert len(patterns) == 120
        assert len(set(patterns)) == 120
        assert patterns[0] == IDENTITY
        assert list(patterns) == sorted(patterns)

    def test_partners(self):
        for p in all_patterns():
            assert len(partners(p)) == 109
            assert p not in partners(p)

    def test_valid_pattern_sets(self):
        sets = valid_pattern_sets()
        assert len(sets) == NUM_PATTERN_SETS == 6540
        assert len(set(sets)) == len(sets)
        assert list(sets) == sorted(sets)
        for pattern_set in sets:
            assert pattern_set.first < pattern_set.second
            assert pattern_set.distance >= 3

    def test_each_pattern_in_109_sets(self):
        counts = Counter(
            pattern for pattern_set in valid_pattern_sets()
            for pattern in pattern_set
        )
        assert set(counts.values()) == {109}

    @pytest.mark.parametrize('set_id', [0, 1, 3270, 6539])
    def test_set_ids(self, set_id):
        pattern_set = pattern_set_by_id(set_id)
        assert pattern_set_id(pattern_set) == set_id

    @pytest.mark.parametrize('set_id', [-1, 6540])
    def test_unknown_set_id(self, set_id):
        with pytest.raises(PatternError):
            pattern_set_by_id(set_id)


class TestPatternSet:

    def test_canonical_order(self):
        a, b = Pattern.parse('21453'), Pattern.parse('12345')
        pattern_set = PatternSet(a, b)
        assert pattern_set.first == b
        assert pattern_set.second == a
        assert pattern_set == PatternSet(b, a)
        assert str(pattern_set) == '12345,21453'

    @pytest.mark.parametrize(
        'text',
        ['12345,21453', '21453,12345', '12345;21453', '12345 21453',
         '1234521453'],
        ids=['comma', 'reversed', 'semicolon', 'space', 'packed']
    )
    def test_parse(self, text):
        assert str(PatternSet.parse(text)) == '12345,21453'

    def test_same_pattern(self):
        with pytest.raises(PatternError):
            PatternSet(IDENTITY, IDENTITY)

    def test_too_close(self):
        with pytest.raises(PatternError) as excinfo:
            PatternSet.parse('12345,21345')
        assert 'differ in 2 positions' in str(excinfo.value)

    def test_invalid_text(self):
        with pytest.raises(PatternError):
            PatternSet.parse('12345')

    def test_container(self):
        pattern_set = PatternSet.parse('12345,21453')
        assert IDENTITY in pattern_set
        assert Pattern.parse('21345') not in pattern_set
        assert list(pattern_set) == [IDENTITY, Pattern.parse('21453')]
        assert pattern_set[1] == Pattern.parse('21453')
        assert len(pattern_set) == 2

    def test_shared_with(self):
        secret = PatternSet.parse('12345,21453')
        assert secret.shared_with(secret) == 2
        assert secret.shared_with(PatternSet.parse('12345,23514')) == 1
        assert secret.shared_with(PatternSet.parse('23514,34125')) == 0


class TestSampling:

    def test_sample_pattern_is_fair(self, rng):
        pattern_set = PatternSet.parse('12345,21453')
        draws = 100000
        firsts = 0
        for _ in range(draws):
            index, pattern = sample_pattern(pattern_set, rng)
            assert pattern == pattern_set[index]
            firsts += index == 0
        assert abs(firsts / draws - 0.5) < 0.01

    @pytest.mark.slow
    def test_sample_pattern_set_is_uniform(self):
        rng = np.random.default_rng(5)
        draws = 1000000
        counts = np.zeros(NUM_PATTERN_SETS)
        for _ in range(draws):
            counts[pattern_set_id(sample_pattern_set(rng))] += 1
        _, p_value = stats.chisquare(counts)
        assert p_value > 0.001
