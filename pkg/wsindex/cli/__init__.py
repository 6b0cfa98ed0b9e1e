"""Command-line interface.
"""
