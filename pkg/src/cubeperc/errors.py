"""Shared exception types.

Input/config problems raise ValueError (or its ConfigError subclass) and map
to CLI exit code 1; capacity guards raise CapacityError and map to exit 2.
"""


class CapacityError(RuntimeError):
    """An operation was asked to exceed its desk-scale capacity guard."""


class ConfigError(ValueError):
    """An experiment or CLI configuration is invalid."""
