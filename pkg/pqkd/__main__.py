# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

import sys

from .cli import main

sys.exit(main())
