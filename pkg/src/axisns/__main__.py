from . import _threads  # noqa: F401  (must run before numpy is imported)
from .cli import main

raise SystemExit(main())
