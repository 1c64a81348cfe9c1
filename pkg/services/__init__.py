"""Computation modules of the replica saddle toolkit."""
