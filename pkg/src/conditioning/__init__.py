"""
Conditioning Package

Single-photon subtraction and observables of the conditional mechanical state.
"""
