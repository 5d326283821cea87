"""Engines: group arithmetic, exact character sums, constructions, filters and search"""
