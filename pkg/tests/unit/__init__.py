"""Unit tests for rep-lab."""
