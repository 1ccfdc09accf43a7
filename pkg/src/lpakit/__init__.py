"""Exact invariants and term arithmetic for Leavitt path algebras."""
