"""Test suite for fronttrack."""
