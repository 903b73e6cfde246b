"""Hochschild homology of the skew polynomial rings E(A, u, alpha, p)"""
