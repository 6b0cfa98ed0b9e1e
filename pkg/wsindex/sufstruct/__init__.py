"""Suffix trees and property suffix trees.
"""
