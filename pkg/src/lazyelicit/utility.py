"""Multi-attribute utility models over discrete prospects.

Attributes carry worst/best anchor levels, subutility functions are scaled to
0 at the worst level and 1 at the best, and overall utility is either an
additive combination of subutilities or a multilinear one.  Dominance between
prospects is decided per attribute first and lifted to an overall verdict only
when the model class licenses the inference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence, Union

import numpy as np

from .errors import DimensionMismatchError, EvaluationError, InvalidModelError

Value = Union[float, int, str]

SCALE_TOL = 1e-9

# Dominance relations.
STRICT = "strict"
WEAK_EQUAL = "weak-equal"
NONE = "none"

# Inference bases.
ADDITIVE = "additive"
MULTILINEAR_INDEPENDENT = "multilinear-independent"
REFUSED_DEPENDENT_MULTILINEAR = "refused-dependent-multilinear"


@dataclass(frozen=True)
class Attribute:
    """One outcome dimension with its worst and best anchor levels."""

    name: str
    kind: Literal["discrete", "continuous"]
    worst: Value
    best: Value
    unit: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("discrete", "continuous"):
            raise InvalidModelError(f"attribute {self.name}: unknown kind {self.kind!r}")
        if self.worst == self.best:
            raise InvalidModelError(f"attribute {self.name}: worst and best levels coincide")
        if self.kind == "continuous":
            for label, level in (("worst", self.worst), ("best", self.best)):
                if isinstance(level, str) or not math.isfinite(float(level)):
                    raise InvalidModelError(
                        f"attribute {self.name}: {label} level must be a finite real"
                    )


@dataclass(frozen=True)
class SubutilityFunction:
    """Per-attribute utility, tabulated or piecewise linear, with values in [0, 1].

    Piecewise-linear functions interpolate between breakpoints and refuse to
    extrapolate outside their span; tabulated functions only answer for listed
    values.
    """

    owner: str
    form: Literal["tabulated", "piecewise_linear"]
    points: tuple[tuple[Value, float], ...]

    def __post_init__(self) -> None:
        if self.form not in ("tabulated", "piecewise_linear"):
            raise InvalidModelError(f"subutility for {self.owner}: unknown form {self.form!r}")
        if not self.points:
            raise InvalidModelError(f"subutility for {self.owner}: no points")
        object.__setattr__(
            self, "points", tuple((value, float(utility)) for value, utility in self.points)
        )
        for value, utility in self.points:
            if not -SCALE_TOL <= utility <= 1.0 + SCALE_TOL:
                raise InvalidModelError(
                    f"subutility for {self.owner}: utility {utility} for value {value!r} "
                    "is outside [0, 1]"
                )
        if self.form == "tabulated":
            seen = []
            for value, _ in self.points:
                if value in seen:
                    raise InvalidModelError(
                        f"subutility for {self.owner}: duplicate tabulated value {value!r}"
                    )
                seen.append(value)
        else:
            values = []
            for value, _ in self.points:
                if isinstance(value, str):
                    raise InvalidModelError(
                        f"subutility for {self.owner}: piecewise-linear breakpoints must be numeric"
                    )
                values.append(float(value))
            if any(b <= a for a, b in zip(values, values[1:])):
                raise InvalidModelError(
                    f"subutility for {self.owner}: breakpoints must be strictly increasing"
                )

    def evaluate(self, value: Value) -> float:
        """Return the utility of ``value``, raising EvaluationError off-domain."""
        if self.form == "tabulated":
            for tabulated, utility in self.points:
                if type(tabulated) is str or type(value) is str:
                    if tabulated == value:
                        return utility
                elif not isinstance(value, str) and float(tabulated) == float(value):
                    return utility
            raise EvaluationError(
                f"attribute {self.owner}: value {value!r} is not tabulated"
            )
        if isinstance(value, str):
            raise EvaluationError(
                f"attribute {self.owner}: value {value!r} is not numeric"
            )
        x = float(value)
        lo, hi = self.points[0][0], self.points[-1][0]
        if x < float(lo) or x > float(hi):
            raise EvaluationError(
                f"attribute {self.owner}: value {value!r} lies outside [{lo}, {hi}]"
            )
        xs = [float(v) for v, _ in self.points]
        ys = [u for _, u in self.points]
        return float(np.interp(x, xs, ys))


def check_anchoring(attribute: Attribute, subutility: SubutilityFunction) -> None:
    """Verify u(worst) = 0 and u(best) = 1 for the attribute's subutility."""
    if subutility.owner != attribute.name:
        raise InvalidModelError(
            f"subutility owned by {subutility.owner!r} paired with attribute {attribute.name!r}"
        )
    at_worst = subutility.evaluate(attribute.worst)
    at_best = subutility.evaluate(attribute.best)
    if abs(at_worst) > SCALE_TOL or abs(at_best - 1.0) > SCALE_TOL:
        raise InvalidModelError(
            f"attribute {attribute.name}: subutility must map worst to 0 and best to 1, "
            f"got {at_worst} and {at_best}"
        )


@dataclass(frozen=True)
class Outcome:
    """A concrete tuple of attribute values, one per attribute."""

    values: tuple[Value, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))


@dataclass(frozen=True)
class Prospect:
    """A finite probability distribution over outcomes."""

    support: tuple[tuple[Outcome, float], ...]

    def __post_init__(self) -> None:
        support = tuple((outcome, float(p)) for outcome, p in self.support)
        object.__setattr__(self, "support", support)
        if not support:
            raise InvalidModelError("prospect has empty support")
        lengths = {len(outcome.values) for outcome, _ in support}
        if len(lengths) != 1:
            raise DimensionMismatchError("prospect outcomes differ in length")
        total = 0.0
        seen: list[Outcome] = []
        for outcome, p in support:
            if p < 0.0:
                raise InvalidModelError(f"negative probability {p} in prospect")
            if outcome in seen:
                raise InvalidModelError(f"duplicate outcome {outcome.values} in prospect")
            seen.append(outcome)
            total += p
        if abs(total - 1.0) > SCALE_TOL:
            raise InvalidModelError(f"prospect probabilities sum to {total}, not 1")


@dataclass(frozen=True)
class AdditiveModel:
    """Additive utility: nonnegative per-attribute weights summing to 1."""

    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if not weights:
            raise InvalidModelError("additive model has no weights")
        if any(w < 0.0 for w in weights):
            raise InvalidModelError("additive weights must be nonnegative")
        if abs(sum(weights) - 1.0) > SCALE_TOL:
            raise InvalidModelError(f"additive weights sum to {sum(weights)}, not 1")


@dataclass(frozen=True)
class MultilinearModel:
    """Multilinear utility: a coefficient per nonempty attribute subset.

    The scaling convention requires the evaluation at the all-ones subutility
    vector (the sum of all coefficients) to equal 1; violations raise rather
    than being renormalized silently.
    """

    n_attributes: int
    coefficients: Mapping[frozenset[int], float]

    def __post_init__(self) -> None:
        coeffs = {frozenset(key): float(v) for key, v in self.coefficients.items()}
        object.__setattr__(self, "coefficients", coeffs)
        if self.n_attributes < 1:
            raise InvalidModelError("multilinear model needs at least one attribute")
        universe = frozenset(range(self.n_attributes))
        for key in coeffs:
            if not key or not key <= universe:
                raise InvalidModelError(
                    f"coefficient subset {sorted(key)} is not a nonempty subset of "
                    f"0..{self.n_attributes - 1}"
                )
        total = sum(coeffs.values())
        if abs(total - 1.0) > SCALE_TOL:
            raise InvalidModelError(
                f"multilinear coefficients evaluate to {total} at the all-ones vector, not 1"
            )

    @classmethod
    def additive(cls, weights: Sequence[float]) -> "MultilinearModel":
        """Embed an additive model as singleton coefficients."""
        return cls(
            n_attributes=len(weights),
            coefficients={frozenset([i]): float(w) for i, w in enumerate(weights)},
        )

    @classmethod
    def product(cls, n_attributes: int) -> "MultilinearModel":
        """The pure product utility u = u_1 * ... * u_n."""
        return cls(
            n_attributes=n_attributes,
            coefficients={frozenset(range(n_attributes)): 1.0},
        )

    @classmethod
    def from_mui(cls, model: "MuiModel") -> "MultilinearModel":
        """Expand multiplicative-form constants into subset coefficients."""
        n = len(model.weights)
        coeffs: dict[frozenset[int], float] = {}
        for mask in range(1, 1 << n):
            subset = frozenset(i for i in range(n) if mask >> i & 1)
            coeff = model.master ** (len(subset) - 1)
            for i in subset:
                coeff *= model.weights[i]
            coeffs[subset] = coeff
        return cls(n_attributes=n, coefficients=coeffs)


@dataclass(frozen=True)
class MuiModel:
    """Multiplicative-form constants: a master constant and per-attribute weights.

    The master constant k satisfies 1 + k = prod(1 + k * k_i); k = 0 reduces to
    the additive form.
    """

    master: float
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "master", float(self.master))
        if self.master <= -1.0:
            raise InvalidModelError(f"master constant {self.master} must exceed -1")
        if any(not 0.0 <= w <= 1.0 for w in weights):
            raise InvalidModelError("multiplicative weights must lie in [0, 1]")
        product = 1.0
        for w in weights:
            product *= 1.0 + self.master * w
        if abs((1.0 + self.master) - product) > SCALE_TOL:
            raise InvalidModelError(
                f"master constant {self.master} violates 1 + k = prod(1 + k*k_i) "
                f"(residual {abs(1.0 + self.master - product)})"
            )

    @classmethod
    def solve(cls, weights: Sequence[float]) -> "MuiModel":
        return cls(master=solve_multiplicative_constant(weights), weights=tuple(weights))


@dataclass(frozen=True)
class DominanceVerdict:
    """Outcome of a dominance check: relation plus the basis that licenses it."""

    relation: str
    basis: str | None = None


def expected_subutilities(
    prospect: Prospect, subutilities: Sequence[SubutilityFunction]
) -> tuple[float, ...]:
    """Per-attribute expected subutility vector of a prospect.

    Each component is the probability-weighted sum of that attribute's
    subutility over the prospect's support.
    """
    n = len(subutilities)
    out = [0.0] * n
    for outcome, p in prospect.support:
        if len(outcome.values) != n:
            raise DimensionMismatchError(
                f"outcome has {len(outcome.values)} values but {n} subutilities given"
            )
        for i, fn in enumerate(subutilities):
            out[i] += p * fn.evaluate(outcome.values[i])
    return tuple(out)


def additive_expected_utility(model: AdditiveModel, w: Sequence[float]) -> float:
    """Inner product of additive weights with an expected-subutility vector."""
    if len(model.weights) != len(w):
        raise DimensionMismatchError(
            f"model has {len(model.weights)} weights, vector has {len(w)}"
        )
    return float(np.dot(model.weights, np.asarray(w, dtype=float)))


def _multilinear_term(model: MultilinearModel, components: Sequence[float]) -> float:
    total = 0.0
    for subset, coeff in model.coefficients.items():
        term = coeff
        for i in subset:
            term *= components[i]
        total += term
    return total


def multilinear_expected_utility(
    prospect: Prospect,
    model: MultilinearModel,
    subutilities: Sequence[SubutilityFunction],
) -> float:
    """Expected multilinear utility of a prospect over its joint distribution."""
    if len(subutilities) != model.n_attributes:
        raise DimensionMismatchError(
            f"model covers {model.n_attributes} attributes, {len(subutilities)} subutilities given"
        )
    total = 0.0
    for outcome, p in prospect.support:
        if len(outcome.values) != model.n_attributes:
            raise DimensionMismatchError(
                f"outcome has {len(outcome.values)} values, model covers {model.n_attributes}"
            )
        components = [fn.evaluate(v) for fn, v in zip(subutilities, outcome.values)]
        total += p * _multilinear_term(model, components)
    return total


def multilinear_on_marginals(w: Sequence[float], model: MultilinearModel) -> float:
    """Multilinear evaluation on per-attribute expectations.

    For prospects whose attributes are probabilistically independent this
    equals the expected multilinear utility; it is monotone nondecreasing in
    each component for properly scaled models.
    """
    if len(w) != model.n_attributes:
        raise DimensionMismatchError(
            f"vector has {len(w)} components, model covers {model.n_attributes}"
        )
    for x in w:
        if not -SCALE_TOL <= float(x) <= 1.0 + SCALE_TOL:
            raise ValueError(f"marginal expectation {x} is outside [0, 1]")
    return _multilinear_term(model, [float(x) for x in w])


def solve_multiplicative_constant(weights: Sequence[float]) -> float:
    """Solve 1 + k = prod(1 + k * k_i) for the master constant k.

    Returns 0 when the weights already sum to 1.  Otherwise returns the unique
    nonzero root with k > -1: positive when the weights sum below 1, in
    (-1, 0) when they sum above 1.  Found by bracketed bisection on the
    residual prod(1 + k*k_i) - (1 + k).
    """
    ws = [float(w) for w in weights]
    if len(ws) < 2:
        raise InvalidModelError("multiplicative form needs at least two attributes")
    if any(w <= 0.0 or w > 1.0 for w in ws):
        raise InvalidModelError("multiplicative weights must lie in (0, 1]")
    total = sum(ws)
    if abs(total - 1.0) <= 1e-12:
        return 0.0

    def residual(k: float) -> float:
        product = 1.0
        for w in ws:
            product *= 1.0 + k * w
        return product - (1.0 + k)

    if total < 1.0:
        lo, hi = 1e-12, 1.0
        while residual(hi) <= 0.0:
            hi *= 2.0
            if hi > 1e6:
                raise InvalidModelError("no positive master constant below 1e6")
    else:
        lo, hi = -1.0 + 1e-12, -1e-12
        if residual(lo) <= 0.0:
            raise InvalidModelError(
                "weights admit no master constant in (-1, 0); "
                "a unit weight with sum above 1 is degenerate"
            )
    # residual(lo) and residual(hi) straddle zero on both branches:
    # below-1 weights give residual < 0 just right of 0, above-1 give
    # residual < 0 just left of 0.
    f_lo = residual(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = residual(mid)
        if abs(f_mid) <= 1e-12:
            lo = hi = mid
            break
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    if abs(residual(root)) > SCALE_TOL:
        raise InvalidModelError(f"bisection failed to converge, residual {residual(root)}")
    return root


def componentwise_dominance(
    w_a: Sequence[float], w_b: Sequence[float], epsilon: float = 0.0
) -> DominanceVerdict:
    """Compare two expected-subutility vectors coordinate by coordinate.

    Strict requires every coordinate of ``w_a`` to reach ``w_b - epsilon`` and
    at least one to exceed ``w_b + epsilon``; weak-equal means all coordinates
    agree within epsilon.
    """
    if epsilon < 0.0:
        raise ValueError("epsilon must be nonnegative")
    a = np.asarray(w_a, dtype=float)
    b = np.asarray(w_b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"vector lengths differ: {a.shape} vs {b.shape}")
    diff = a - b
    if np.all(np.abs(diff) <= epsilon):
        return DominanceVerdict(WEAK_EQUAL)
    if np.all(diff >= -epsilon) and np.any(diff > epsilon):
        return DominanceVerdict(STRICT)
    return DominanceVerdict(NONE)


def overall_dominance(
    w_a: Sequence[float],
    w_b: Sequence[float],
    model_class: Literal["additive", "multilinear"],
    independence_declared: bool = False,
    epsilon: float = 0.0,
) -> DominanceVerdict:
    """Lift a componentwise verdict to overall dominance when licensed.

    Additive models always license the inference.  Multilinear models license
    it only when the prospects' attributes are declared probabilistically
    independent; without that declaration the inference is refused outright,
    because componentwise dominance can coexist with the opposite overall
    ranking.
    """
    verdict = componentwise_dominance(w_a, w_b, epsilon)
    if model_class == "additive":
        return DominanceVerdict(verdict.relation, ADDITIVE)
    if model_class == "multilinear":
        if independence_declared:
            return DominanceVerdict(verdict.relation, MULTILINEAR_INDEPENDENT)
        return DominanceVerdict(NONE, REFUSED_DEPENDENT_MULTILINEAR)
    raise ValueError(f"unknown model class {model_class!r}")
