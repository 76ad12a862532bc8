"""
Configuration Package

Contains application settings and the pinned physical constant sets.
"""
