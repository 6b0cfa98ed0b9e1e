"""Tests and usage experiments for wsindex.
"""
