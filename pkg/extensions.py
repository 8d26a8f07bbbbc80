import logging

import numpy as np

# Логери пакета: сам застосунок і всі modules.* (getLogger(__name__))
_LOGGER_NAMES = ("distsig", "modules")
_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def init_logging(level: str | int = "INFO") -> logging.Logger:
    """Один обробник на процес; повторний виклик лише змінює рівень."""
    level = level if isinstance(level, int) else str(level).upper()
    for name in _LOGGER_NAMES:
        log = logging.getLogger(name)
        if not log.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter(_LOG_FORMAT))
            log.addHandler(handler)
        log.setLevel(level)
    return logging.getLogger(_LOGGER_NAMES[0])


def make_rng(seed) -> np.random.Generator:
    # Увесь випадковий потік проєкту йде через PCG64; зерно: int або SeedSequence
    return np.random.Generator(np.random.PCG64(seed))
