"""Tests for shared utilities and infrastructure."""
