"""Permutations, intervals and their combinatorial and topological invariants."""
