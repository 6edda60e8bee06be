"""Unit tests for the oracle package."""
