# SPDX-FileCopyrightText: 2026-present adder-capacity contributors
#
# SPDX-License-Identifier: MIT
__version__ = "0.1.0"
