"""Exact real-zero counting for Pfaffian and exponential-polynomial functions."""
