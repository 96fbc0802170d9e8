"""Test suite for conical-ab."""
