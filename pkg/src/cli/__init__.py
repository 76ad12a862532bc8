"""
CLI Package

Configuration-driven experiment runner with deterministic CSV output.
"""
