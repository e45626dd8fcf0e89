"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` (used in CLI reports)
and an optional ``witness`` describing the offending data.
"""

from fractions import Fraction

import numpy as np


class XsqError(Exception):
    code = "error"

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness

    def to_dict(self):
        d = {"code": self.code, "message": str(self)}
        if self.witness is not None:
            d["witness"] = _plain(self.witness)
        return d


def _plain(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if hasattr(obj, "item"):
        return obj.item()
    return obj


def _make(name, code, base=XsqError):
    return type(name, (base,), {"code": code})


# group-core
MalformedTable = _make("MalformedTable", "malformed_table")
NotAssociative = _make("NotAssociative", "not_associative")
NoIdentity = _make("NoIdentity", "no_identity")
NoInverse = _make("NoInverse", "no_inverse")
TooLarge = _make("TooLarge", "too_large")
NotNormal = _make("NotNormal", "not_normal")
NotHomomorphism = _make("NotHomomorphism", "not_homomorphism")
SearchBudgetExceeded = _make("SearchBudgetExceeded", "search_budget_exceeded")
NotAbelian = _make("NotAbelian", "not_abelian")
NotSubgroup = _make("NotSubgroup", "not_subgroup")

# fp-group
Overflow = _make("Overflow", "overflow")
IndexOutOfRange = _make("IndexOutOfRange", "index_out_of_range")
MalformedPresentation = _make("MalformedPresentation", "malformed_presentation")

# actions-xmod
NotAutomorphism = _make("NotAutomorphism", "not_automorphism")
NotFunctorial = _make("NotFunctorial", "not_functorial")
IdentityNotFixed = _make("IdentityNotFixed", "identity_not_fixed")
NotGroupoid = _make("NotGroupoid", "not_groupoid")
NotCrossedModule = _make("NotCrossedModule", "not_crossed_module")
MalformedGraph = _make("MalformedGraph", "malformed_graph")

# tensor-xsq
StructureMapIllDefined = _make("StructureMapIllDefined", "structure_map_ill_defined")
NotWellDefined = _make("NotWellDefined", "not_well_defined")
SquareMismatch = _make("SquareMismatch", "square_mismatch")
AssociativityFailure = _make("AssociativityFailure", "associativity_failure")
MalformedDoubleGraph = _make("MalformedDoubleGraph", "malformed_double_graph")
NotDoubleGroupoid = _make("NotDoubleGroupoid", "not_double_groupoid")
NotSurjective = _make("NotSurjective", "not_surjective")
KernelNotNormalInQ = _make("KernelNotNormalInQ", "kernel_not_normal_in_q")
IncompatiblePair = _make("IncompatiblePair", "incompatible_pair")

# lie
NotAntisymmetric = _make("NotAntisymmetric", "not_antisymmetric")
JacobiFailure = _make("JacobiFailure", "jacobi_failure")
BracketNotDescending = _make("BracketNotDescending", "bracket_not_descending")
StructureMapNotDescending = _make("StructureMapNotDescending", "structure_map_not_descending")
ShapeMismatch = _make("ShapeMismatch", "shape_mismatch")

# cli
ParseError = _make("ParseError", "parse_error")
UnknownReference = _make("UnknownReference", "unknown_reference")
ValidationError = _make("ValidationError", "validation_error")
