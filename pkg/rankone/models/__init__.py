"""Immutable value types: 2x2 matrices and energy representations."""
