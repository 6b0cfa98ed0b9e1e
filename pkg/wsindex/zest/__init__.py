"""Z-estimations of weighted sequences and their solid factor tries.
"""
