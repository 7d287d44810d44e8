"""Exact Ext/Tor machinery and vanishing deciders for morphisms of modules
over finite-dimensional algebras over prime fields."""

__version__ = "0.1.0"
