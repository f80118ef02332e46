"""Vocabularies, token masks and the constrained decoding loop."""
