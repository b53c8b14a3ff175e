"""
Configuration Module

Runtime settings and the estimator constants profiles.
"""
