"""Unit tests for the integrate package."""
