# modules/cli/models.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

SUBCOMMANDS = ("spectrum", "bounds", "train", "analyze", "gen-sbm")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FAILURE = 4


@dataclass(frozen=True)
class Command:
    """Розібраний виклик: одна підкоманда та її прапорці (ще не виконаний)."""
    subcommand: str
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def out(self) -> Optional[str]:
        return self.params.get("out")
