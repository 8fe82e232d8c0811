"""Unit test package for cyclowin."""
