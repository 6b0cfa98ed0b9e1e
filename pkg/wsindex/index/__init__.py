"""Weighted and approximate indexes over concatenated string families.
"""
