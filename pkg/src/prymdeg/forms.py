"""Quadratic forms attached to smoothing weights.

The vanishing-cycle form is sum_j alpha_j z_j^2 on the chain space,
with one positive integer weight per node.  Restrictions to H1 and to
sublattices of the half-integral chain space are exact rational Gram
matrices on explicitly named basis vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonPositiveWeight, NotApplicable
from .intlinalg import gram_fraction, is_positive_definite
from .lattices import IntegerLattice


@dataclass(frozen=True)
class QuadraticForm:
    """Gram matrix over a named basis of chain-space vectors."""

    gram: tuple                  # rows of Fractions
    basis_vectors: tuple         # rows of Fractions in C1 coordinates
    weights: tuple               # the alpha vector this form came from
    positive_definite: bool = True

    @property
    def rank(self):
        return len(self.gram)

    def value(self, coords):
        """q(x) for x given in basis coordinates."""
        total = Fraction(0)
        for i, a in enumerate(coords):
            if not a:
                continue
            for j, b in enumerate(coords):
                if b:
                    total += Fraction(a) * Fraction(b) * self.gram[i][j]
        return total

    def pairing(self, u, v):
        total = Fraction(0)
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if b:
                    total += Fraction(a) * Fraction(b) * self.gram[i][j]
        return total


def check_weights(alpha, n_edges):
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n_edges:
        raise NonPositiveWeight(
            f"expected {n_edges} weights, got {len(alpha)}"
        )
    if any(a < 1 for a in alpha):
        raise NonPositiveWeight(f"weights must be >= 1, got {alpha}")
    return alpha


def form_on_vectors(alpha, vectors) -> QuadraticForm:
    """Gram of sum_j alpha_j z_j^2 restricted to the given row vectors."""
    vectors = tuple(tuple(Fraction(x) for x in v) for v in vectors)
    gram = gram_fraction(vectors, alpha)
    return QuadraticForm(
        gram, vectors, tuple(alpha), is_positive_definite(gram)
    )


def picard_lefschetz_form(hom, alpha) -> QuadraticForm:
    """The vanishing-cycle form on H1 in the fundamental cycle basis."""
    alpha = check_weights(alpha, hom.chain.n_edges)
    form = form_on_vectors(alpha, hom.cycles.basis)
    if not form.positive_definite:
        # impossible for positive weights on a cycle basis
        raise NonPositiveWeight("form is not positive definite")
    return form


def restrict_form(form: QuadraticForm, target) -> QuadraticForm:
    """The same ambient form on a sublattice basis.

    ``target`` is an IntegerLattice (its HNF basis is used) or an
    explicit sequence of chain-space vectors.
    """
    if isinstance(target, IntegerLattice):
        vectors = target.vectors()
    else:
        vectors = tuple(tuple(Fraction(x) for x in v) for v in target)
    return form_on_vectors(form.weights, vectors)


def half_pairing_form(form_minus: QuadraticForm, y_minus) -> QuadraticForm:
    """The halved-polarization pairing on X^- re-expressed through the
    isomorphism y -> y/2 from Y^-; defined only when Y^- = 2X^-.

    Its Gram is exactly twice the Gram of the restricted form.
    """
    if not (y_minus.is_exact and y_minus.lattice == y_minus.lower_bound):
        raise NotApplicable(
            "halved pairing needs the period lattice to equal 2X^-"
        )
    gram = tuple(tuple(2 * x for x in row) for row in form_minus.gram)
    return QuadraticForm(
        gram, form_minus.basis_vectors, form_minus.weights,
        form_minus.positive_definite,
    )
