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
import threading
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional, Union

DEFAULT_LOG_FORMAT = \
    '%(asctime)s - %(name)s - {%(filename)s:%(lineno)d} - [%(threadName)s-%(thread_id)s]- %(levelname)s - %(message)s'


class LogHelper:
    @staticmethod
    def make_logger(*, log_dir: Union[str, Path] = ".", log_file: str, log_level, log_retain: int, log_size: int,
                    logger: str, log_format: Optional[str] = None, console: bool = True) -> logging.Logger:
        """
        Set up a logger with rotating file handler and (optionally) console output.

        Calling this twice for the same logger replaces the handlers it installed earlier,
        so repeated CLI invocations in one process do not duplicate lines.

       :param log_dir: Log directory
       :param log_file
       :param log_level
       :param log_retain
       :param log_size
       :param logger
       :param log_format
       :param console: also log to stderr
       :return: logging.Logger object
        """
        if not log_file:
            raise RuntimeError('The log file name must be specified in config or passed as an argument')

        log_path = Path(log_dir) / log_file

        if log_level is None:
            log_level = logging.INFO

        log = logging.getLogger(logger)
        log.setLevel(log_level)
        fmt = logging.Formatter(log_format or DEFAULT_LOG_FORMAT)

        for handler in list(log.handlers):
            if getattr(handler, "_floqlat_owned", False):
                log.removeHandler(handler)
                handler.close()

        log_path.parent.mkdir(parents=True, exist_ok=True)

        # Rotating file handler
        file_handler = RotatingFileHandler(log_path, backupCount=int(log_retain), maxBytes=int(log_size))
        file_handler.addFilter(LogHelper.thread_id_filter)
        file_handler.setFormatter(fmt)
        file_handler._floqlat_owned = True
        log.addHandler(file_handler)

        if console:
            # stderr keeps stdout free for the run summary
            console_handler = logging.StreamHandler()
            console_handler.setLevel(log_level)
            console_handler.addFilter(LogHelper.thread_id_filter)
            console_handler.setFormatter(fmt)
            console_handler._floqlat_owned = True
            log.addHandler(console_handler)

        return log

    @staticmethod
    def thread_id_filter(record):
        """Inject thread_id to log records"""
        record.thread_id = threading.get_native_id()
        return record
