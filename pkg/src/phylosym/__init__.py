"""Isomorphism and symmetries of random phylogenetic trees."""
