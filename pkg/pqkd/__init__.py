# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

"""The top-level module for pattern-qkd package.

This module tracks the version of the package as well as the base
package info used by various functions within pattern-qkd.

Modules:

    quantum
    code5
    patterns
    channel
    protocol
    analysis
    config
    output
    cli

Classes:

    StateVec
    DensityMatrix
    Pattern
    PatternSet
    Syndrome
    NoiseModel
    EveStrategy
    SessionConfig
    SessionReport

Misc variables:

    __copyright__
    __version__
    __license__
    __author__
    __author_email__
    __maintainer__
    __maintainer_email__
    __url__
    __description__

Refer to the README for details on the use of this package.
"""

from .quantum import *
from .patterns import *
from .code5 import *
from .channel import *
from .protocol import *
from .analysis import *
from .config import *
from .output import *


__copyright__ = 'Copyright (C) 2026 The pattern-qkd contributors'
__version__ = '0.1.0'
__license__ = 'MIT'
__author__ = 'The pattern-qkd contributors'
__author_email__ = 'pattern-qkd@users.noreply.github.com'
__maintainer__ = 'The pattern-qkd contributors'
__maintainer_email__ = 'pattern-qkd@users.noreply.github.com'
__url__ = 'https://github.com/pattern-qkd/pattern-qkd'
__description__ = 'Pattern-based QKD simulator over the five-qubit code.'
