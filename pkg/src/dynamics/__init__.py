"""
Dynamics Package

Linearized drift and diffusion, stability and covariance propagation.
"""
