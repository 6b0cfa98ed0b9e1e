"""Randomized z-estimations and approximate families by sampling.
"""
