from .models import SUBCOMMANDS, Command  # noqa: F401
from .services import execute, main, parse_args  # noqa: F401
