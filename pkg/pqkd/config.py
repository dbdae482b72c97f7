# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

"""Session configuration files.

A configuration file is a flat ``key=value`` document in the dotenv
style::

    # honest session over 25 km
    secret_set=12345,21453
    num_blocks=10000
    distance_km=25

Keys are the :class:`~pqkd.protocol.SessionConfig` field names plus the
flattened noise and eavesdropper parameters. Values are cast with a
django-environ :class:`~environ.Env` scheme reading from the parsed file
instead of ``os.environ``.
"""

import logging
import re
from typing import NamedTuple

from environ import Env
from environ.compat import ImproperlyConfigured

from .analysis import guessed_set_with_overlap
from .channel import ChannelError, EveStrategy, NoiseModel
from .patterns import PatternError, PatternSet, pattern_set_by_id
from .protocol import SessionConfig, SessionConfigError

logger = logging.getLogger(__name__)


__all__ = [
    'ConfigError', 'ConfigLine', 'SessionEnv', 'SCHEME', 'CONFIG_KEYS',
    'parse_config_text', 'read_config_file', 'read_config',
    'config_from_mapping', 'config_to_mapping',
]

LINE_RE = re.compile(r'\A(?:export )?([A-Za-z_0-9]+)=(.*)\Z')


class ConfigError(ImproperlyConfigured):
    """A configuration file or value is invalid.

    The message reads ``line <n>: <field>: <reason>``; parts that are not
    known are left out.
    """

    def __init__(self, reason, lineno=None, field=None):
        self.reason = reason
        self.lineno = lineno
        self.field = field

        parts = []
        if lineno is not None:
            parts.append('line {}'.format(lineno))
        if field is not None:
            parts.append(field)
        parts.append(reason)
        super().__init__(': '.join(parts))


class ConfigLine(NamedTuple):
    value: str
    lineno: int


def _unquote(value):
    match = re.match(r"\A'(.*)'\Z", value)
    if match:
        return match.group(1)
    match = re.match(r'\A"(.*)"\Z', value)
    if match:
        return re.sub(r'\\(.)', r'\1', match.group(1))
    return value


def parse_config_text(content):
    """Parse ``key=value`` lines.

    Blank lines and ``#`` comments are skipped, an ``export`` prefix and
    surrounding quotes are tolerated.

    :returns: dict ``{key: ConfigLine}`` in file order.
    :raises ConfigError: on malformed lines and repeated keys.
    """
    lines = {}
    for lineno, line in enumerate(content.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue

        match = LINE_RE.match(stripped)
        if not match:
            raise ConfigError('expected key=value, got {!r}'.format(line),
                              lineno=lineno)

        key, value = match.group(1), _unquote(match.group(2).strip())
        if key in lines:
            raise ConfigError(
                'duplicate key, first set on line {}'.format(
                    lines[key].lineno),
                lineno=lineno, field=key)
        lines[key] = ConfigLine(value, lineno)
    return lines


def read_config_file(path, encoding='utf-8'):
    """Read and parse a configuration file, see :func:`parse_config_text`."""
    try:
        with open(str(path), encoding=encoding) as file:
            content = file.read()
    except OSError as exc:
        raise ConfigError('cannot read {}: {}'.format(
            path, exc.strerror or exc)) from exc

    logger.debug('Read session configuration from: %s', path)
    return parse_config_text(content)


class SessionEnv(Env):

    """:class:`~environ.Env` over a parsed configuration file."""

    def __init__(self, values, **scheme):
        super().__init__(**scheme)
        self.ENVIRON = dict(values)


def _real(value):
    return float(value)


def _count(value):
    return int(str(value).strip())


def _pattern_set(value):
    if isinstance(value, PatternSet):
        return value
    value = str(value).strip()
    if value.startswith('set:'):
        return pattern_set_by_id(int(value[len('set:'):]))
    return PatternSet.parse(value)


def _basis(value):
    return str(value).strip().upper()


SCHEME = {
    'num_blocks': (_count, 10000),
    'secret_set': _pattern_set,
    'test_fraction': (_real, 0.5),
    'mqer_threshold': (_real, 0.10),
    'per_qubit_flip_prob': (_real, 0.0),
    'distance_km': (_real, 0.0),
    'loss_db_per_km': (_real, 0.2),
    'mean_photon_number': (_real, 0.0),
    'eve_kind': (str, 'none'),
    'eve_knowledge': (str, 'uniform'),
    'master_seed': (_count, 0),
    'logical_basis': (_basis, 'Z'),
}

CONFIG_KEYS = tuple(SCHEME)

_OVERLAP_KNOWLEDGE = {'k0': 0, 'k1': 1, 'k2': 2}


def _eve_strategy(kind, knowledge, secret_set):
    knowledge = knowledge.strip()
    if knowledge == 'uniform':
        guessed_set = None
    elif knowledge in _OVERLAP_KNOWLEDGE:
        guessed_set = guessed_set_with_overlap(
            secret_set, _OVERLAP_KNOWLEDGE[knowledge])
    else:
        guessed_set = _pattern_set(knowledge)
    return EveStrategy(kind=kind.strip(), guessed_set=guessed_set)


def config_from_mapping(values, lines=None):
    """Build a validated :class:`SessionConfig` from raw values.

    :param values: mapping of configuration keys to strings (or already
        typed values).
    :param lines: optional mapping of keys to line numbers, used in
        error messages.
    """
    lines = lines or {}
    unknown = [key for key in values if key not in SCHEME]
    if unknown:
        key = min(unknown, key=lambda name: lines.get(name, 0))
        raise ConfigError('unknown key', lineno=lines.get(key), field=key)

    env = SessionEnv(values, **SCHEME)

    def get(key):
        try:
            return env(key)
        except ImproperlyConfigured as exc:
            raise ConfigError('required key is missing', field=key) from exc
        except (ValueError, TypeError, PatternError) as exc:
            raise ConfigError(str(exc), lineno=lines.get(key),
                              field=key) from exc

    typed = {key: get(key) for key in SCHEME}

    try:
        eve = _eve_strategy(typed['eve_kind'], typed['eve_knowledge'],
                            typed['secret_set'])
        noise = NoiseModel(
            per_qubit_flip_prob=typed['per_qubit_flip_prob'],
            distance_km=typed['distance_km'],
            loss_db_per_km=typed['loss_db_per_km'],
            mean_photon_number=typed['mean_photon_number'],
        )
        config = SessionConfig(
            num_blocks=typed['num_blocks'],
            secret_set=typed['secret_set'],
            test_fraction=typed['test_fraction'],
            mqer_threshold=typed['mqer_threshold'],
            noise=noise,
            eve=eve,
            master_seed=typed['master_seed'],
            logical_basis=typed['logical_basis'],
        )
    except (ChannelError, SessionConfigError) as exc:
        raise ConfigError(exc.reason, lineno=lines.get(exc.field),
                          field=exc.field) from exc
    except (ValueError, PatternError) as exc:
        raise ConfigError(str(exc), lineno=lines.get('eve_knowledge'),
                          field='eve_knowledge') from exc

    logger.debug('Session configuration: %s', config)
    return config


def read_config(path, **overrides):
    """Read a configuration file; keyword overrides win over the file.

    Overrides set to ``None`` are ignored.
    """
    parsed = read_config_file(path)
    values = {key: line.value for key, line in parsed.items()}
    lines = {key: line.lineno for key, line in parsed.items()}

    for key, value in overrides.items():
        if value is not None:
            values[key] = value
            lines.pop(key, None)
    return config_from_mapping(values, lines)


def config_to_mapping(config):
    """Flatten ``config`` back into configuration keys and strings."""
    return {
        'num_blocks': str(config.num_blocks),
        'secret_set': str(config.secret_set),
        'test_fraction': repr(config.test_fraction),
        'mqer_threshold': repr(config.mqer_threshold),
        'per_qubit_flip_prob': repr(config.noise.per_qubit_flip_prob),
        'distance_km': repr(config.noise.distance_km),
        'loss_db_per_km': repr(config.noise.loss_db_per_km),
        'mean_photon_number': repr(config.noise.mean_photon_number),
        'eve_kind': config.eve.kind.value,
        'eve_knowledge': config.eve.knowledge,
        'master_seed': str(config.master_seed),
        'logical_basis': config.logical_basis,
    }
