"""Exact Grothendieck residues and localization of Futaki-Morita invariants on CP^n."""
