import logging
import sys
import threading
import time
from datetime import datetime
from enum import Enum
from logging.config import dictConfig

CONSOLE_HANDLER_NAME = "persfl_console"


class LogLevel(Enum):
    TRACE = 5  # one line per probing round
    DEBUG = logging.DEBUG
    INFO = logging.INFO
    SUCCESS = 25  # finished experiments, passed checks
    WARNING = logging.WARNING
    ERROR = logging.ERROR
    CRITICAL = logging.CRITICAL


logging.addLevelName(LogLevel.TRACE.value, "TRACE")
logging.addLevelName(LogLevel.SUCCESS.value, "SUCCESS")


class DeltaTimeFilter(logging.Filter):
    """Stamps each record with the time since the previous record and since logging was configured."""

    def __init__(self):
        super().__init__()
        self._lock = threading.Lock()
        self.start_time = time.perf_counter()
        self.prev_time = self.start_time

    def filter(self, record):
        with self._lock:
            now = time.perf_counter()
            record.delta_t = f"Δt:{now - self.prev_time:.6f}s"
            record.elapsed = f"{now - self.start_time:9.3f}s"
            self.prev_time = now
        return True


class CustomFormatter(logging.Formatter):
    def formatTime(self, record, datefmt=None):
        # microsecond resolution; rounds run far faster than a millisecond at small d
        return datetime.fromtimestamp(record.created).isoformat(timespec="microseconds")


def thread_color(thread_name: str) -> str:
    """Fixed 256-color code per worker thread, so interleaved settings stay readable."""
    code = 17 + sum(thread_name.encode()) * 37 % 214
    return f"\033[38;5;{code}m"


class ColoredConsoleHandler(logging.StreamHandler):
    COLORS = {
        "TRACE": "\033[37m",
        "DEBUG": "\033[34m",
        "INFO": "\033[96m",
        "SUCCESS": "\033[95m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[41m",
    }
    RESET = "\033[0m"

    def format(self, record):
        formatted = super().format(record)
        if not getattr(self.stream, "isatty", lambda: False)():
            return formatted
        thread_tag = f"[{record.threadName}]"
        formatted = formatted.replace(thread_tag, thread_color(record.threadName) + thread_tag + self.RESET, 1)
        return self.COLORS.get(record.levelname, self.RESET) + formatted + self.RESET


class LoggerBuilder:
    DEFAULT_LOGGING = {"version": 1, "disable_existing_loggers": False}

    format_string = ("[%(asctime)s] [%(elapsed)s %(delta_t)s] [%(levelname)8s] [%(threadName)s] "
                     "[%(name)s:%(funcName)s():%(lineno)s] %(message)s")

    def __init__(self, level: LogLevel):
        self.level = level
        self.formatter = CustomFormatter(fmt=self.format_string)

    def build_console_handler(self) -> logging.Handler:
        # stderr, so tables printed by the CLI stay alone on stdout
        console_handler = ColoredConsoleHandler(stream=sys.stderr)
        console_handler.setLevel(LogLevel.TRACE.value)
        console_handler.setFormatter(self.formatter)
        console_handler.addFilter(DeltaTimeFilter())
        console_handler.set_name(CONSOLE_HANDLER_NAME)
        return console_handler

    def configure(self):
        root_logger = logging.getLogger()
        root_logger.setLevel(self.level.value)
        if any(handler.get_name() == CONSOLE_HANDLER_NAME for handler in root_logger.handlers):
            return
        dictConfig(self.DEFAULT_LOGGING)
        root_logger.addHandler(self.build_console_handler())


def _trace(self, message, *args, **kwargs):
    if self.isEnabledFor(LogLevel.TRACE.value):
        self._log(LogLevel.TRACE.value, message, args, **kwargs, stacklevel=2)


def _success(self, message, *args, **kwargs):
    if self.isEnabledFor(LogLevel.SUCCESS.value):
        self._log(LogLevel.SUCCESS.value, message, args, **kwargs, stacklevel=2)


logging.Logger.trace = _trace
logging.Logger.success = _success


def configure_logging(level: LogLevel = LogLevel.INFO):
    """Install the console handler once; later calls only change the level."""
    LoggerBuilder(level).configure()


if __name__ == "__main__":
    configure_logging(LogLevel.TRACE)
    demo_logger = logging.getLogger("persfl_simulator.logging_demo")
    for level in LogLevel:
        demo_logger.log(level.value, f"{level.name} message")
