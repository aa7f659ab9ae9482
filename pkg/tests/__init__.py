"""Tests for globalrank."""
