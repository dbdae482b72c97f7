# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

"""Permutation patterns of the five physical positions of a block.

A pattern ``p`` is stored in one-line notation: entry ``i`` is ``p(i)``,
the physical position the qubit at standard position ``i`` is sent on.
A pattern set is the unordered pair of patterns Alice and Bob share.
"""

import functools
import itertools
import logging
from dataclasses import dataclass

logger = logging.getLogger(__name__)


__all__ = [
    'BLOCK_SIZE', 'MIN_SET_DISTANCE', 'NUM_PATTERNS', 'NUM_PATTERN_SETS',
    'PatternError', 'Pattern', 'PatternSet', 'IDENTITY',
    'all_patterns', 'pattern_distance', 'compose', 'invert', 'partners',
    'valid_pattern_sets', 'pattern_set_id', 'pattern_set_by_id',
    'sample_pattern_set', 'sample_pattern',
]

BLOCK_SIZE = 5
MIN_SET_DISTANCE = 3
NUM_PATTERNS = 120
NUM_PATTERN_SETS = 6540


class PatternError(ValueError):
    """A pattern or a pattern set violates its invariants."""


@dataclass(frozen=True, order=True)
class Pattern:

    """A permutation of the block positions ``1..5``.

    Usage:::

        p = Pattern((2, 1, 3, 4, 5))
        p(1)          # -> 2
        str(p)        # -> '21345'
        Pattern.parse('21345') == p
    """

    mapping: tuple

    def __post_init__(self):
        try:
            mapping = tuple(int(entry) for entry in self.mapping)
        except (TypeError, ValueError) as exc:
            raise PatternError(
                'Invalid pattern mapping: {!r}'.format(self.mapping)
            ) from exc

        if sorted(mapping) != list(range(1, BLOCK_SIZE + 1)):
            raise PatternError(
                'Not a permutation of positions 1..{}: {!r}'.format(
                    BLOCK_SIZE, self.mapping))
        object.__setattr__(self, 'mapping', mapping)

    @classmethod
    def parse(cls, text):
        """Build a pattern from its one-line form, e.g. ``'21435'``.

        Separators (spaces, commas, parentheses) are tolerated.
        """
        digits = []
        for char in text.strip():
            if char.isdigit():
                digits.append(int(char))
            elif char not in ' ,()[]':
                raise PatternError('Invalid pattern text: {!r}'.format(text))
        return cls(tuple(digits))

    def __call__(self, position):
        if not 1 <= position <= BLOCK_SIZE:
            raise PatternError('Position out of range: {}'.format(position))
        return self.mapping[position - 1]

    def __iter__(self):
        return iter(self.mapping)

    def __len__(self):
        return BLOCK_SIZE

    def __str__(self):
        return ''.join(str(entry) for entry in self.mapping)

    def __repr__(self):
        return '<Pattern:{}>'.format(self)


IDENTITY = Pattern(tuple(range(1, BLOCK_SIZE + 1)))


def pattern_distance(p, q):
    """Number of positions where the two patterns disagree."""
    return sum(a != b for a, b in zip(p.mapping, q.mapping))


def compose(p, q):
    """Return ``p∘q``, i.e. apply ``q`` first and then ``p``."""
    return Pattern(tuple(p(q(i)) for i in range(1, BLOCK_SIZE + 1)))


def invert(p):
    """Return the inverse permutation of ``p``."""
    inverse = [0] * BLOCK_SIZE
    for position, target in enumerate(p.mapping, start=1):
        inverse[target - 1] = position
    return Pattern(tuple(inverse))


@dataclass(frozen=True, order=True)
class PatternSet:

    """The secret pair of patterns, stored in canonical order."""

    first: Pattern
    second: Pattern

    def __post_init__(self):
        if self.first == self.second:
            raise PatternError(
                'A pattern set needs two distinct patterns: {}'.format(
                    self.first))

        distance = pattern_distance(self.first, self.second)
        if distance < MIN_SET_DISTANCE:
            raise PatternError(
                'Patterns {} and {} differ in {} positions, at least {} '
                'are required'.format(
                    self.first, self.second, distance, MIN_SET_DISTANCE))

        if self.second < self.first:
            first, second = self.second, self.first
            object.__setattr__(self, 'first', first)
            object.__setattr__(self, 'second', second)

    @classmethod
    def parse(cls, text):
        """Build a set from ``'12345,21435'`` style text."""
        parts = [part for part in text.replace(';', ',').split(',') if part]
        if len(parts) == 2:
            return cls(Pattern.parse(parts[0]), Pattern.parse(parts[1]))

        # Fall back to two blocks of five digits without a separator.
        digits = [char for char in text if char.isdigit()]
        if len(digits) != 2 * BLOCK_SIZE:
            raise PatternError('Invalid pattern set text: {!r}'.format(text))
        return cls(Pattern.parse(''.join(digits[:BLOCK_SIZE])),
                   Pattern.parse(''.join(digits[BLOCK_SIZE:])))

    @property
    def distance(self):
        return pattern_distance(self.first, self.second)

    def shared_with(self, other):
        """Number of patterns this set has in common with ``other``."""
        return len({self.first, self.second} & {other.first, other.second})

    def __getitem__(self, index):
        return (self.first, self.second)[index]

    def __iter__(self):
        return iter((self.first, self.second))

    def __len__(self):
        return 2

    def __contains__(self, pattern):
        return pattern in (self.first, self.second)

    def __str__(self):
        return '{},{}'.format(self.first, self.second)

    def __repr__(self):
        return '<PatternSet:{}>'.format(self)


@functools.lru_cache(maxsize=None)
def all_patterns():
    """Return the 120 patterns in lexicographic order."""
    patterns = tuple(
        Pattern(mapping)
        for mapping in itertools.permutations(range(1, BLOCK_SIZE + 1))
    )
    logger.debug('Enumerated %d patterns', len(patterns))
    return patterns


def partners(pattern):
    """Patterns that may share a set with ``pattern``."""
    return tuple(
        other for other in all_patterns()
        if pattern_distance(pattern, other) >= MIN_SET_DISTANCE
    )


@functools.lru_cache(maxsize=None)
def valid_pattern_sets():
    """Return every valid pattern set in canonical lexicographic order."""
    patterns = all_patterns()
    sets = tuple(
        PatternSet(p, q)
        for p, q in itertools.combinations(patterns, 2)
        if pattern_distance(p, q) >= MIN_SET_DISTANCE
    )
    logger.debug('Enumerated %d valid pattern sets', len(sets))
    return sets


@functools.lru_cache(maxsize=None)
def _set_index():
    return {pattern_set: index
            for index, pattern_set in enumerate(valid_pattern_sets())}


def pattern_set_id(pattern_set):
    """Position of ``pattern_set`` in :func:`valid_pattern_sets`."""
    return _set_index()[pattern_set]


def pattern_set_by_id(set_id):
    sets = valid_pattern_sets()
    if not 0 <= set_id < len(sets):
        raise PatternError(
            'Unknown pattern set id {}, expected 0..{}'.format(
                set_id, len(sets) - 1))
    return sets[set_id]


def sample_pattern_set(rng):
    """Draw a valid pattern set uniformly."""
    sets = valid_pattern_sets()
    return sets[int(rng.integers(len(sets)))]


def sample_pattern(pattern_set, rng):
    """Draw one member of ``pattern_set`` uniformly.

    :returns: ``(index, pattern)`` with ``index`` in ``{0, 1}``.
    """
    index = int(rng.integers(2))
    return index, pattern_set[index]
