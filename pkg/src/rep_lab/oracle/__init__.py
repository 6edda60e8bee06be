"""Closed-form ground truth."""

from .example import ExampleFamily, ExampleValues, example_eval, example_tB

__all__ = ["ExampleFamily", "ExampleValues", "example_eval", "example_tB"]
