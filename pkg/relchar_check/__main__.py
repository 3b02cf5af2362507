"""Module entrypoint for `python -m relchar_check`."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())
