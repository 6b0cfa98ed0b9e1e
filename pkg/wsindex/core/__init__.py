"""Weighted sequences, probability arithmetic, and brute-force oracles.
"""
