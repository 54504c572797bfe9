"""Numerical and exact-arithmetic engine for nevanlab."""
