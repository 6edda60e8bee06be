"""Unit tests for the analysis package."""
