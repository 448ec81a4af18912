"""Certified toolkit for sums of recurrence terms equal to sums of prime powers."""

__version__ = "0.1.0"
