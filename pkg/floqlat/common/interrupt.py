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
import logging
import signal
import threading

logger = logging.getLogger(__name__)


class SweepInterruptHandler:
    """
    Context manager that turns the first SIGINT/SIGTERM into a stop request for a sweep.

    The original handlers are restored on the first signal, so a second Ctrl-C
    aborts immediately. Outside the main thread no handler is installed and
    `interrupted` only changes through `request_stop()`.
    """

    def __init__(self, signals=(signal.SIGINT, signal.SIGTERM)):
        self.signals = signals
        self.original_handlers = {}
        self.interrupted = False
        self.released = True

    def __enter__(self):
        self.interrupted = False
        if threading.current_thread() is threading.main_thread():
            for sig in self.signals:
                self.original_handlers[sig] = signal.getsignal(sig)
                signal.signal(sig, self.handler)
            self.released = False
        return self

    def handler(self, signum, frame):
        logger.warning("signal %s received; finishing the points already running", signum)
        self.release()
        self.interrupted = True

    def request_stop(self) -> None:
        self.interrupted = True

    def __exit__(self, exc_type, exc, tb):
        self.release()

    def release(self) -> bool:
        if self.released:
            return False
        for sig, original in self.original_handlers.items():
            signal.signal(sig, original)
        self.original_handlers.clear()
        self.released = True
        return True
