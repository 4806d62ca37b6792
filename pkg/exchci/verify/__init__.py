"""Exhaustive and seeded checks of the library's structural results, run by ``exchci verify``."""
