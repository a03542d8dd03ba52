#!/usr/bin/env python3
# MIT License
#
# Copyright (c) 2025 floqlat developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
EXIT_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3


class FloqlatException(Exception):
    """
    Floqlat Exception
    """
    def __init__(self, message: str, exit_code: int = EXIT_FAILURE):
        super().__init__(message)
        self.exit_code = exit_code

    def get_exit_code(self) -> int:
        return self.exit_code


class ValidationError(FloqlatException, ValueError):
    """Raised when an input violates a precondition or a range guard."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=EXIT_VALIDATION)


class ConvergenceError(FloqlatException, RuntimeError):
    """Raised when a solver does not reach its steady state or tolerance."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=EXIT_CONVERGENCE)
