"""Skill-based course sequence recommendation aimed at job-market reach."""

__version__ = "0.1.0"
