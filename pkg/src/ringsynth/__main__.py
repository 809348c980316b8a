"""Allow `python -m ringsynth` as an alternative to the console script."""

from .cli import console_entry

console_entry()
