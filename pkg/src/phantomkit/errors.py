"""Exception hierarchy shared by every phantomkit module."""

from __future__ import annotations


class PhantomKitError(Exception):
    """Base class for all library errors."""


class InputError(PhantomKitError):
    """Malformed or invalid user input (maps to CLI exit code 2)."""


class BadField(InputError):
    pass


class NonAssociative(InputError):
    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"structure constants not associative at basis triple ({i}, {j}, {k})")
        self.triple = (i, j, k)


class BadUnit(InputError):
    def __init__(self, i: int):
        super().__init__(f"unit law fails on basis element {i}")
        self.index = i


class UnknownKey(InputError):
    pass


class BadParams(InputError):
    pass


class InvalidModule(InputError):
    pass


class InvalidMorphism(InputError):
    pass


class SideMismatch(PhantomKitError):
    pass


class ShapeMismatch(PhantomKitError):
    pass


class LiftFailed(PhantomKitError):
    """A lifting problem with free source had no solution. Always a bug."""


class NotReflexive(PhantomKitError):
    pass


class NoCertificate(PhantomKitError):
    pass


class NotGP(PhantomKitError):
    pass


class NoMonoIntoProjective(PhantomKitError):
    pass


class DegreeTooLow(PhantomKitError):
    pass


class HullVerificationFailed(PhantomKitError):
    pass


class ConfigError(InputError):
    pass
