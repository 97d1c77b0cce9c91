"""Bundled example filtration spec files, stored in canonical form."""
