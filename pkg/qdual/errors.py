"""Exception hierarchy.

Every error carries a short ``tag`` that the verification engine records in
trial diagnostics, and inherits the nearest builtin so callers may catch
either the qdual class or the usual Python one.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from rapidfuzz import fuzz, process


class QDualError(Exception):
	tag = "error"


class DivisionByVanishingFactor(QDualError, ZeroDivisionError):
	tag = "vanishing_factor"

	def __init__(self, message: str, entry: Optional[int] = None):
		super().__init__(message)
		self.entry = entry


class VanishingDenominatorFactor(DivisionByVanishingFactor):
	tag = "vanishing_denominator_factor"

	def __init__(self, message: str, i: Optional[int] = None, j: Optional[int] = None):
		super().__init__(message)
		self.i = i
		self.j = j


class VanishingDenominatorProduct(QDualError, ZeroDivisionError):
	tag = "vanishing_denominator_product"


class DenominatorVanishes(QDualError, ZeroDivisionError):
	tag = "denominator_vanishes"

	def __init__(self, index: int, message: Optional[str] = None):
		super().__init__(message or f"denominator vanishes at term {index}")
		self.index = index


class NearSingular(DenominatorVanishes):
	tag = "near_singular"


class NoConvergence(QDualError, ArithmeticError):
	tag = "no_convergence"


class QuadratureNotConverged(NoConvergence):
	tag = "quadrature_not_converged"


class ParameterOutsideAnnulus(QDualError, ValueError):
	tag = "outside_annulus"


class InvalidSeries(QDualError, ValueError):
	tag = "invalid_series"


class IndexOutOfRange(QDualError, ValueError):
	tag = "index_out_of_range"


class DegreeExceedsN(QDualError, ValueError):
	tag = "degree_exceeds_n"


class NonFiniteValue(QDualError, ArithmeticError):
	tag = "non_finite"


class IndexKindMismatch(QDualError, TypeError):
	tag = "index_kind_mismatch"


class _UnknownName(QDualError, KeyError):
	kind = "name"

	def __init__(self, name: str, suggestions: Sequence[str] = ()):
		self.name = name
		self.suggestions = list(suggestions)
		hint = f" (did you mean: {', '.join(self.suggestions)})" if self.suggestions else ""
		super().__init__(f"unknown {self.kind} {name!r}{hint}")

	def __str__(self) -> str:
		# KeyError quotes its argument; keep the plain message
		return self.args[0]

	@classmethod
	def among(cls, name: str, choices: Iterable[str], limit: int = 3, cutoff: int = 60):
		"""Build the error with the closest known names as suggestions."""
		matches = process.extract(name.lower(), list(choices), scorer=fuzz.partial_ratio,
								  processor=str.lower, limit=limit, score_cutoff=cutoff)
		return cls(name, [choice for choice, _score, _idx in matches])


class UnknownIdentity(_UnknownName):
	tag = "unknown_identity"
	kind = "identity"


class UnknownFamily(_UnknownName):
	tag = "unknown_family"
	kind = "family"


class ConfigError(QDualError, ValueError):
	tag = "config_error"


class UnknownKernel(_UnknownName):
	tag = "unknown_kernel"
	kind = "kernel"
