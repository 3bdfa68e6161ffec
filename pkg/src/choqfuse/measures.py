"""Sugeno fuzzy measures over a finite set of criteria.

A measure here is fixed by the per-criterion densities (the singleton
measures) together with one interaction parameter ``lambda_ > -1`` chosen
so that the whole criterion set gets measure exactly one. Measures of
larger subsets follow the union rule for disjoint coalitions,

    m(A | B) = m(A) + m(B) + lambda_ * m(A) * m(B),

which makes the family additive at ``lambda_ = 0``, sub-additive for
negative values, and super-additive for positive ones.
"""

import math

from ._validation import check_densities
from .errors import NoAdmissibleLambdaError

__all__ = ["SugenoMeasure", "solve_lambda"]

# |sum(g) - 1| at or below this snaps the parameter to the additive case.
_SUM_ONE_TOL = 1e-12
# Bound on |prod(1 + x*g) - (1 + x)| scaled by 1 + |x| for an accepted root.
_RESIDUAL_TOL = 1e-9
_MAX_ITER = 200


def _normalization_gap(x, densities):
    """Value of f(x) = prod(1 + x*g_i) - 1 - x."""
    return math.prod(1.0 + x * g for g in densities) - 1.0 - x


def _deflated_coefficients(densities):
    """Ascending coefficients of h(x) = f(x)/x with the zero root divided out.

    Expanding the product gives f its elementary-symmetric coefficients, so
    h carries the exactly-conditioned constant term sum(g) - 1 followed by
    strictly positive higher terms. Evaluating h suffers none of the
    cancellation that evaluating f directly does near zero.
    """
    sym = [1.0]
    for g in densities:
        nxt = [0.0] * (len(sym) + 1)
        for k, c in enumerate(sym):
            nxt[k] += c
            nxt[k + 1] += c * g
        sym = nxt
    coeffs = sym[1:]
    coeffs[0] = math.fsum(densities) - 1.0
    return coeffs


def _deflated_gap(x, coeffs):
    """Value and derivative of h at x, by Horner's rule."""
    value = 0.0
    deriv = 0.0
    for c in reversed(coeffs):
        deriv = deriv * x + value
        value = value * x + c
    return value, deriv


def _bracket(coeffs, densities, total):
    """Ends (neg_end, pos_end) with h(neg_end) < 0 < h(pos_end).

    Zero is always one end since h(0) = sum(g) - 1 is nonzero here. Above
    one the other end approaches -1 from the right; below one it expands
    geometrically upward.
    """
    if total > 1.0:
        remainder = math.prod(1.0 - g for g in densities)
        if remainder <= 0.0:
            raise NoAdmissibleLambdaError(
                "densities sit too close to 1 to separate the root from -1")
        left = -1.0 + 0.5 * remainder
        if not _deflated_gap(left, coeffs)[0] < 0.0:
            raise NoAdmissibleLambdaError("failed to anchor the bracket near -1")
        return left, 0.0
    hi = 1.0
    for _ in range(_MAX_ITER):
        if _deflated_gap(hi, coeffs)[0] > 0.0:
            return 0.0, hi
        hi *= 4.0
    raise NoAdmissibleLambdaError("positive scaling parameter could not be bracketed")


def _refine(neg_end, pos_end, coeffs):
    """Newton steps guarded by bisection inside a sign-changing bracket."""
    x = 0.5 * (neg_end + pos_end)
    for _ in range(_MAX_ITER):
        h, dh = _deflated_gap(x, coeffs)
        if h == 0.0:
            return x
        if h < 0.0:
            neg_end = x
        else:
            pos_end = x
        lo, hi = (neg_end, pos_end) if neg_end < pos_end else (pos_end, neg_end)
        nxt = x - h / dh if dh != 0.0 else x
        if not lo < nxt < hi:
            nxt = 0.5 * (neg_end + pos_end)
        if nxt == x:
            return x
        x = nxt
    return x


def solve_lambda(densities):
    """Solve the normalization identity for the measure's scaling parameter.

    Finds the unique ``x > -1`` with ``prod(1 + x*g_i) == 1 + x`` apart
    from the trivial root at zero. The root's sign is pinned by the density
    sum: above one the parameter falls in (-1, 0), below one it is
    positive, and a sum of exactly one (within 1e-12) returns 0.

    Parameters
    ----------
    densities : array-like of shape (n_criteria,)
        Per-criterion singleton measures; see `check_densities` for the
        admissible ranges.

    Returns
    -------
    float
        The scaling parameter; its residual in the identity is at most
        ``1e-9 * (1 + abs(value))`` and in practice near machine precision.

    Raises
    ------
    InvalidDensityError
        If the densities are out of range, non-finite, or a single
        criterion does not carry density 1.
    NoAdmissibleLambdaError
        If the nonzero root cannot be bracketed, which only happens for
        degenerate density configurations at the edge of floating point.
    """
    g = check_densities(densities)
    if g.size == 1:
        # One criterion with density 1 satisfies the identity for every x.
        return 0.0
    dens = [float(v) for v in g]
    total = math.fsum(dens)
    if abs(total - 1.0) <= _SUM_ONE_TOL:
        return 0.0
    coeffs = _deflated_coefficients(dens)
    neg_end, pos_end = _bracket(coeffs, dens, total)
    root = _refine(neg_end, pos_end, coeffs)
    residual = abs(_normalization_gap(root, dens))
    if not root > -1.0 or residual > _RESIDUAL_TOL * (1.0 + abs(root)):
        raise NoAdmissibleLambdaError(
            f"root refinement stalled at {root!r} with residual {residual:.3e}")
    return float(root)


class SugenoMeasure:
    """Fuzzy measure fixed by criterion densities and an interaction parameter.

    Parameters
    ----------
    densities : array-like of shape (n_criteria,)
        Singleton measures. Each must lie strictly inside (0, 1) when there
        are at least two criteria; a lone criterion must carry density 1.
    lambda_ : float, optional
        Interaction parameter. Solved from the densities when omitted. A
        supplied value must exceed -1 and satisfy the normalization
        identity within ``1e-9 * (1 + abs(lambda_))``.

    Notes
    -----
    Instances are immutable after construction and safe to share between
    concurrently running tasks.

    Examples
    --------
    >>> m = SugenoMeasure([0.5, 0.3, 0.2])
    >>> m.lambda_
    0.0
    >>> m.of_subset({0, 2})
    0.7
    """

    def __init__(self, densities, lambda_=None):
        self.densities = check_densities(densities)
        if lambda_ is None:
            lambda_ = solve_lambda(self.densities)
        else:
            lambda_ = float(lambda_)
            if not lambda_ > -1.0:
                raise ValueError(f"lambda_ must exceed -1, got {lambda_}")
            dens = [float(v) for v in self.densities]
            residual = abs(_normalization_gap(lambda_, dens))
            if residual > _RESIDUAL_TOL * (1.0 + abs(lambda_)):
                raise ValueError(
                    f"lambda_={lambda_!r} violates the normalization identity "
                    f"(residual {residual:.3e})")
        self.lambda_ = lambda_

    @property
    def n_criteria(self):
        return int(self.densities.size)

    def of_subset(self, indices):
        """Measure of the coalition holding the given criterion indices.

        The empty collection returns exactly 0, a singleton returns its
        density, and larger coalitions fold the union rule over members in
        ascending index order. The full set lands within 1e-6 of 1.

        Raises
        ------
        IndexError
            If any index falls outside ``[0, n_criteria)``.
        ValueError
            If an index is repeated.
        """
        members = sorted(int(i) for i in indices)
        n = self.densities.size
        previous = None
        total = 0.0
        for i in members:
            if i < 0 or i >= n:
                raise IndexError(f"criterion index {i} outside [0, {n})")
            if i == previous:
                raise ValueError(f"criterion index {i} appears more than once")
            previous = i
            g = float(self.densities[i])
            total = total + g + self.lambda_ * total * g
        return total

    def __repr__(self):
        values = ", ".join(f"{v:.6g}" for v in self.densities)
        return f"{type(self).__name__}([{values}], lambda_={self.lambda_:.6g})"
