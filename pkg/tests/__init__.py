"""
Test Package for phononLab

This package contains all test modules for the phononLab simulation.
"""
