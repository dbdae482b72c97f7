# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

import os

import numpy as np
import pytest

from pqkd import PatternSet
from .fixtures import FakeSession


def _fixture_path(name):
    return os.path.join(os.path.dirname(__file__), 'fixtures', name)


@pytest.fixture
def rng():
    """Return a generator with a fixed seed."""
    return np.random.default_rng(20260417)


@pytest.fixture
def secret_set():
    """Return the secret set shared by the session fixtures."""
    return PatternSet.parse(FakeSession.SECRET_SET)


@pytest.fixture
def honest_config_file():
    """Return honest.txt file path for the testing purposes."""
    return _fixture_path('honest.txt')


@pytest.fixture
def eve_config_file():
    """Return eve_uniform.txt file path for the testing purposes."""
    return _fixture_path('eve_uniform.txt')


@pytest.fixture
def quoted_config_file():
    """Return quoted.txt file path for the testing purposes."""
    return _fixture_path('quoted.txt')


@pytest.fixture(params=[
    ('malformed.txt', 4, None),
    ('unknown_key.txt', 3, 'secret_sets'),
    ('duplicate.txt', 5, 'num_blocks'),
    ('bad_value.txt', 2, 'test_fraction'),
])
def broken_config_file(request):
    """Return a broken configuration with the expected line and field."""
    name, lineno, field = request.param
    return _fixture_path(name), lineno, field
