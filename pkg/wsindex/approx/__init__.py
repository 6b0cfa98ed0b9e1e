"""Approximate indexes for probability-threshold reporting.
"""
