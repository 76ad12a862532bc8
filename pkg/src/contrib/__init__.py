"""
Contrib Package - Shared/Common Modules

This package contains base classes and utilities shared across all entities.
It includes base schemas, enumerations and the exception hierarchy.
"""
