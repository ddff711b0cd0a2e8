"""Koszul cohomology of curves from finite presentation data."""
