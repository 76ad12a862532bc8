"""
Model Package

Physical experiment parameters and the couplings derived from them.
"""
