from .configure_logging import LogLevel, configure_logging

__all__ = ["LogLevel", "configure_logging"]
