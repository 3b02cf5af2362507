"""Test suite for relchar-check."""
