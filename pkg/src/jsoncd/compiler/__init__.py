"""Compilation of schemas into byte-level constraint automata."""
