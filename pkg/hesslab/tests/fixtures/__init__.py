"""Shared test problems and strategies."""
