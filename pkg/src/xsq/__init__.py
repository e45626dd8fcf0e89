"""Crossed modules, crossed squares and non-abelian tensor products of finite groups and rational Lie algebras."""

__version__ = "0.1.0"
