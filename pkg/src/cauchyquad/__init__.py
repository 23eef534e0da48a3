"""Quadrature rules from rational approximation of Cauchy transforms."""
