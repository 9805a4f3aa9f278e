"""Exact-arithmetic engine for germforge."""
