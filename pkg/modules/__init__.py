"""
Feature modules of the MoLe toolkit: d2r, morphing, augconv, attacks,
metrics and toytrain.
"""
