"""Exact arithmetic for minimal rank-one (Ferenczi) subshifts."""

__version__ = "0.1.0"
