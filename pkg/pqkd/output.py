# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

"""Records, reports, CSV tables and run manifests on disk."""

import csv
import hashlib
import json
import logging
import math
import re
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

from .config import parse_config_text

logger = logging.getLogger(__name__)


__all__ = [
    'RECORD_COLUMNS', 'MISSING', 'RunManifest', 'format_value',
    'record_row', 'write_records', 'read_records', 'write_report',
    'read_report', 'write_csv', 'read_csv', 'file_digest', 'utc_now',
    'write_manifest', 'read_manifest',
]

RECORD_COLUMNS = (
    'block_id', 'alice_bit', 'a_idx', 'b_idx', 'lost', 'syndrome',
    'bob_bit', 'eve_guess', 'eve_bit', 'sifted', 'tested',
)

#: Placeholder for absent values.
MISSING = '-'

KEY_RE = re.compile(r'\A[A-Za-z_0-9]+\Z')


def format_value(value):
    """Text form of a report or table value.

    Booleans become ``0``/``1``, floats use six significant digits and
    ``None`` becomes ``-``. Non-finite floats are rejected.
    """
    if value is None:
        return MISSING
    if isinstance(value, bool):
        return '1' if value else '0'
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError('Refusing to write non-finite value {!r}'.format(
                value))
        return '{:.6g}'.format(value)
    return str(value)


def record_row(record):
    eve = record.eve
    return [
        format_value(record.block_id),
        format_value(record.alice_bit),
        format_value(record.alice_pattern_index),
        format_value(record.bob_pattern_index),
        format_value(record.lost),
        format_value(record.syndrome),
        format_value(record.bob_bit),
        format_value(eve.guessed_pattern if eve else None),
        format_value(eve.eve_bit if eve else None),
        format_value(record.sifted),
        format_value(record.disclosed_for_test),
    ]


def write_records(path, records):
    """Write one tab separated line per block, after a header line."""
    with open(str(path), 'w', encoding='utf-8', newline='') as file:
        writer = csv.writer(file, delimiter='\t', lineterminator='\n')
        writer.writerow(RECORD_COLUMNS)
        for record in records:
            writer.writerow(record_row(record))
    logger.debug('Wrote %d block record(s) to %s', len(records), path)


def read_records(path):
    """Read a records file back as a list of ``{column: text}`` dicts."""
    with open(str(path), encoding='utf-8', newline='') as file:
        reader = csv.DictReader(file, delimiter='\t')
        if tuple(reader.fieldnames or ()) != RECORD_COLUMNS:
            raise ValueError('{} is not a records file: header {!r}'.format(
                path, reader.fieldnames))
        return list(reader)


def write_report(path, report):
    """Write a flat ``key=value`` document, one entry per line."""
    lines = []
    for key, value in report.items():
        if not KEY_RE.match(key):
            raise ValueError('Invalid report key {!r}'.format(key))
        lines.append('{}={}\n'.format(key, format_value(value)))

    with open(str(path), 'w', encoding='utf-8', newline='') as file:
        file.writelines(lines)
    logger.debug('Wrote report with %d entries to %s', len(lines), path)


def read_report(path):
    """Read a report written by :func:`write_report` as ``{key: text}``."""
    with open(str(path), encoding='utf-8') as file:
        parsed = parse_config_text(file.read())
    return {key: line.value for key, line in parsed.items()}


def write_csv(path, header, rows):
    with open(str(path), 'w', encoding='utf-8', newline='') as file:
        writer = csv.writer(file, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])


def read_csv(path):
    with open(str(path), encoding='utf-8', newline='') as file:
        return list(csv.DictReader(file))


def file_digest(path):
    """SHA-256 hex digest of a file's content."""
    digest = hashlib.sha256()
    with open(str(path), 'rb') as file:
        for chunk in iter(lambda: file.read(65536), b''):
            digest.update(chunk)
    return digest.hexdigest()


def utc_now():
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


@dataclass
class RunManifest:

    """What a run read, wrote and whether it finished.

    ``outputs`` maps each written file to its SHA-256 digest.
    """

    command: str
    tool_version: str
    master_seed: int
    config: dict = field(default_factory=dict)
    started: str = field(default_factory=utc_now)
    finished: str = None
    outputs: dict = field(default_factory=dict)
    complete: bool = False
    error: str = None

    def add_output(self, path):
        self.outputs[str(path)] = file_digest(path)

    def finish(self, complete=True, error=None):
        self.finished = utc_now()
        self.complete = complete
        self.error = error


def write_manifest(path, manifest):
    with open(str(path), 'w', encoding='utf-8') as file:
        json.dump(asdict(manifest), file, indent=2, sort_keys=True)
        file.write('\n')


def read_manifest(path):
    with open(str(path), encoding='utf-8') as file:
        return RunManifest(**json.load(file))
