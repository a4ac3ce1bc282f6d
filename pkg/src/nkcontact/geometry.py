"""Lazily computed geometric data for one frame + structure pair."""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from functools import cached_property

from .contact import (
    ContactStructure,
    NullityFit,
    StructureReport,
    lie_h,
    nullity_fit,
    validate_structure,
)
from .exact import Tensor
from .frame import Connection, FrameManifold, levi_civita, ricci, riemann
from .star import StarRicciData, star_ricci_direct


class Geometry:
    """Everything the soliton and report layers need, computed once.

    ``structure`` carries ``h`` (from brackets) and, when the nullity fit
    succeeds, ``k`` and ``mu``.
    """

    def __init__(self, manifold: FrameManifold, structure: ContactStructure):
        self.manifold = manifold
        self._raw_structure = structure

    @property
    def m(self) -> int:
        return self.manifold.m

    @property
    def dim(self) -> int:
        return self.manifold.dim

    @cached_property
    def connection(self) -> Connection:
        return levi_civita(self.manifold)

    @cached_property
    def curvature(self) -> Tensor:
        return riemann(self.manifold, self.connection)

    @cached_property
    def _ricci(self) -> tuple[Tensor, Fraction]:
        return ricci(self.curvature, self.manifold)

    @property
    def ric(self) -> Tensor:
        return self._ricci[0]

    @property
    def scalar(self) -> Fraction:
        return self._ricci[1]

    @cached_property
    def structure_report(self) -> StructureReport:
        return validate_structure(self.manifold, self._raw_structure)

    @cached_property
    def h(self) -> Tensor:
        if self._raw_structure.h is not None:
            return self._raw_structure.h
        return lie_h(self.manifold, self._raw_structure)

    @cached_property
    def nullity(self) -> NullityFit:
        return nullity_fit(self.manifold, self.curvature, self._raw_structure, self.h)

    @cached_property
    def structure(self) -> ContactStructure:
        fit = self.nullity
        return replace(self._raw_structure, h=self.h, k=fit.k, mu=fit.mu)

    @property
    def k(self) -> Fraction | None:
        return self.nullity.k

    @cached_property
    def star(self) -> StarRicciData:
        return star_ricci_direct(self.manifold, self.curvature, self.structure)

    @property
    def conformal_shift(self) -> Fraction:
        """``1/(2m+1)``, the constant added to p/2 in the conformal equations."""
        return Fraction(1, self.dim)
