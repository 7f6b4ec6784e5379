"""Graded quiver mutation for cluster-tilted algebras of weighted
projective lines: exact mutation engines (graded and sequence form),
rank/tag recovery, the squid recovery pipeline, and a JSON interface."""

__version__ = "0.1.0"
