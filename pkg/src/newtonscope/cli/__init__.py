"""Command-line stages; each module is runnable with ``python -m``."""
