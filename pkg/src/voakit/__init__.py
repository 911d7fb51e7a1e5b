"""Exact mode calculus, conformal vectors and automorphisms for free-boson VOAs."""
