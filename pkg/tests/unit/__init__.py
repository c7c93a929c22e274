"""Unit tests for the WML simulator."""
