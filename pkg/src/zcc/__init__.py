"""zcc: exact arithmetic statistics of spaces of 0-cycles over finite fields."""

__version__ = "0.1.0"
