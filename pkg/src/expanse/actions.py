"""Concrete group actions and the machinery that evaluates words on points.

Generator maps are vectorized: forward/inverse take and return arrays of
shape (k, dim). Inverses are exact where closed forms exist and Newton
iterations (tolerance 1e-13, at most 100 steps) otherwise, which is far
below every separation threshold used downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EvaluationError, ConfigError, ParameterError
from .spaces import CIRCLE, TORUS, Space, canonical, wrap_delta
from .words import FREE, FREE_ABELIAN, Ball, GroupSpec, Word

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
TORUS_SHIFT = (math.sqrt(2.0) - 1.0, math.sqrt(3.0) - 1.0)
CAT_MATRIX = np.array([[2, 1], [1, 1]], dtype=float)
CAT_INVERSE = np.array([[1, -1], [-1, 2]], dtype=float)

_NEWTON_TOL = 1e-13
_NEWTON_MAX = 100


class MapBase:
    """An invertible self-map of a space."""

    name = "map"
    is_isometry = False

    def __init__(self, space: Space):
        self.space = space

    def forward(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inverse(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class IdentityMap(MapBase):
    name = "identity"
    is_isometry = True

    def forward(self, pts):
        return canonical(pts)

    def inverse(self, pts):
        return canonical(pts)


class Rotation(MapBase):
    is_isometry = True

    def __init__(self, alpha: float):
        super().__init__(CIRCLE)
        self.alpha = float(alpha)
        self.name = f"rotation({self.alpha!r})"

    def forward(self, pts):
        return canonical(np.asarray(pts, dtype=float) + self.alpha)

    def inverse(self, pts):
        return canonical(np.asarray(pts, dtype=float) - self.alpha)


class Translation(MapBase):
    is_isometry = True

    def __init__(self, shift):
        super().__init__(TORUS)
        self.shift = np.array(shift, dtype=float)
        self.name = f"translation({tuple(self.shift)!r})"

    def forward(self, pts):
        return canonical(np.asarray(pts, dtype=float) + self.shift)

    def inverse(self, pts):
        return canonical(np.asarray(pts, dtype=float) - self.shift)


class MorseSmale(MapBase):
    """x -> x + a*sin(2*pi*x): one source (0) and one sink (1/2) on the circle."""

    def __init__(self, a: float):
        super().__init__(CIRCLE)
        if not 0.0 < a < 1.0 / (2.0 * math.pi):
            raise ParameterError("morse-smale amplitude must be in (0, 1/(2*pi))")
        self.a = float(a)
        self.name = f"morse_smale({self.a!r})"

    def _f(self, x):
        return x + self.a * np.sin(2.0 * np.pi * x)

    def forward(self, pts):
        return canonical(self._f(np.asarray(pts, dtype=float)))

    def inverse(self, pts):
        # Solve y = x + a*sin(2*pi*x) on the lift; f' >= 1 - 2*pi*a > 0, so
        # the root is unique in [y - a, y + a]. Newton with a bisection
        # safeguard keeps every component inside that bracket.
        y = np.asarray(pts, dtype=float)
        lo, hi = y - self.a, y + self.a
        x = y - self.a * np.sin(2.0 * np.pi * y)
        for _ in range(_NEWTON_MAX):
            r = self._f(x) - y
            if np.max(np.abs(r)) < _NEWTON_TOL:
                break
            lo = np.where(r < 0, x, lo)
            hi = np.where(r > 0, x, hi)
            step = r / (1.0 + 2.0 * np.pi * self.a * np.cos(2.0 * np.pi * x))
            xn = x - step
            bad = (xn <= lo) | (xn >= hi)
            x = np.where(bad, 0.5 * (lo + hi), xn)
        else:
            raise EvaluationError("morse-smale inverse did not converge")
        return canonical(x)


class CatMap(MapBase):
    """The hyperbolic toral automorphism [[2,1],[1,1]] mod 1."""

    name = "cat"

    def __init__(self):
        super().__init__(TORUS)

    def forward(self, pts):
        return canonical(np.asarray(pts, dtype=float) @ CAT_MATRIX.T)

    def inverse(self, pts):
        return canonical(np.asarray(pts, dtype=float) @ CAT_INVERSE.T)


_CAT_LEAD = (3.0 + math.sqrt(5.0)) / 2.0  # leading eigenvalue of CAT_MATRIX


class BlownUpCat(MapBase):
    """Cat map outside radius r0 of the fixed point, identity inside r1.

    Between the radii the map applies ((1-s(rho))I + s(rho)A) to the lift.
    Injectivity needs the image ellipses of concentric circles to stay
    nested, i.e. max(s + rho*s') < lam/(lam-1); the ramp
    s = (1 - r1/rho)/(1 - r1/r0) keeps that expression constant at
    1/(1 - r1/r0), so the radii must satisfy r0/r1 > lam. The ramp is
    continuous and monotone (piecewise smooth, kinked at the two radii).
    """

    def __init__(self, r0: float, r1: float):
        super().__init__(TORUS)
        if not 0.0 < r1 < r0 <= 0.2:
            raise ParameterError("blown-up cat radii must satisfy 0 < r1 < r0 <= 0.2")
        self.r0, self.r1 = float(r0), float(r1)
        self._c = 1.0 / (1.0 - self.r1 / self.r0)
        if self._c * (1.0 - 1.0 / _CAT_LEAD) >= 0.98:
            raise ParameterError(
                "blown-up cat radii ratio r0/r1 too small for an injective surgery"
            )
        self.name = f"blown_cat({self.r0!r},{self.r1!r})"

    def _s_of_rho(self, rho):
        rho = np.asarray(rho, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            raw = self._c * (1.0 - np.where(rho > 0, self.r1 / rho, np.inf))
        return np.clip(raw, 0.0, 1.0)

    def _sprime_of_rho(self, rho):
        inside = (rho > self.r1) & (rho < self.r0)
        safe = np.where(inside, rho, 1.0)
        return np.where(inside, self._c * self.r1 / (safe * safe), 0.0)

    def _surgery(self, v):
        rho = np.sqrt(np.sum(v * v, axis=-1))
        s = self._s_of_rho(rho)[..., None]
        return (1.0 - s) * v + s * (v @ CAT_MATRIX.T)

    def forward(self, pts):
        x = np.asarray(pts, dtype=float)
        v = x - np.round(x)  # lift nearest to the fixed point (0, 0)
        return canonical(self._surgery(v))

    def inverse(self, pts):
        y = np.asarray(pts, dtype=float)
        u = y - np.round(y)
        out = np.empty_like(u)
        done = np.zeros(u.shape[0], dtype=bool)

        # Outside the surgery disc the inverse is the exact cat inverse.
        z = u @ CAT_INVERSE.T
        z = z - np.round(z)
        rho_z = np.sqrt(np.sum(z * z, axis=-1))
        pure = rho_z >= self.r0
        out[pure] = z[pure]
        done |= pure

        if not done.all():
            idx = np.nonzero(~done)[0]
            target = u[idx]
            sol = self._newton(target)
            out[idx] = sol
        res = canonical(out)
        check = self.forward(res)
        err = np.abs(check - canonical(y))
        err = np.minimum(err, 1.0 - err)
        if np.max(np.sqrt(np.sum(err * err, axis=-1))) > 1e-11:
            raise EvaluationError("blown-up cat inverse did not converge")
        return res

    def _newton_sweep(self, start, target):
        v = start.copy()
        for _ in range(_NEWTON_MAX):
            r = self._surgery(v) - target
            if np.max(np.abs(r)) < _NEWTON_TOL:
                break
            rho = np.sqrt(np.sum(v * v, axis=-1))
            s = self._s_of_rho(rho)
            sp = self._sprime_of_rho(rho)
            jac = np.zeros(v.shape[:-1] + (2, 2))
            jac[..., 0, 0] = 1.0 + s
            jac[..., 0, 1] = s
            jac[..., 1, 0] = s
            jac[..., 1, 1] = 1.0
            diff = (v @ CAT_MATRIX.T) - v
            with np.errstate(divide="ignore", invalid="ignore"):
                unit = np.where(rho[..., None] > 0, v / rho[..., None], 0.0)
            jac += (sp[..., None, None]) * diff[..., :, None] * unit[..., None, :]
            det = jac[..., 0, 0] * jac[..., 1, 1] - jac[..., 0, 1] * jac[..., 1, 0]
            det = np.where(np.abs(det) < 1e-30, 1e-30, det)
            inv = np.empty_like(jac)
            inv[..., 0, 0] = jac[..., 1, 1]
            inv[..., 0, 1] = -jac[..., 0, 1]
            inv[..., 1, 0] = -jac[..., 1, 0]
            inv[..., 1, 1] = jac[..., 0, 0]
            inv /= det[..., None, None]
            step = np.einsum("...ij,...j->...i", inv, r)
            nrm = np.sqrt(np.sum(step * step, axis=-1, keepdims=True))
            scale = np.where(nrm > 0.2, 0.2 / np.maximum(nrm, 1e-300), 1.0)
            v = v - step * scale
        return v

    def _newton(self, target):
        # Identity start first, cat-inverse start for whatever is left; the
        # map is injective, so any root reproducing the target is the answer.
        out = np.full_like(target, np.nan)
        solved = np.zeros(target.shape[0], dtype=bool)
        for start in (target, target @ CAT_INVERSE.T):
            v = self._newton_sweep(start, target)
            res = np.max(np.abs(self._surgery(v) - target), axis=-1)
            take = (res < _NEWTON_TOL) & ~solved
            out[take] = v[take]
            solved |= take
            if solved.all():
                return out
        raise EvaluationError("blown-up cat inverse did not converge")


class ConjugatedMap(MapBase):
    """h^-1 o g o h for a conjugating self-map h."""

    def __init__(self, h: MapBase, inner: MapBase):
        super().__init__(inner.space)
        self.h = h
        self.inner = inner
        self.is_isometry = h.is_isometry and inner.is_isometry
        self.name = f"conj({h.name},{inner.name})"

    def forward(self, pts):
        return self.h.inverse(self.inner.forward(self.h.forward(pts)))

    def inverse(self, pts):
        return self.h.inverse(self.inner.inverse(self.h.forward(pts)))


class WordMap(MapBase):
    """The self-map realized by a fixed word of another action."""

    def __init__(self, action: "Action", word: Word):
        super().__init__(action.space)
        self.base_action = action
        self.word = word
        self.is_isometry = action.all_isometries
        self.name = f"word({word})"

    def forward(self, pts):
        return apply_word(self.base_action, self.word, pts)

    def inverse(self, pts):
        from .words import word_inverse

        return apply_word(
            self.base_action, word_inverse(self.base_action.group, self.word), pts
        )


@dataclass
class Action:
    """Generator maps indexed like the group's generators."""

    group: GroupSpec
    space: Space
    gens: list
    name: str = "action"

    def __post_init__(self):
        if len(self.gens) != self.group.rank:
            raise ParameterError("generator count must equal group rank")

    @property
    def all_isometries(self) -> bool:
        return all(g.is_isometry for g in self.gens)

    def apply_letter(self, letter, pts):
        gen, sign = letter
        g = self.gens[gen]
        return g.forward(pts) if sign > 0 else g.inverse(pts)


def apply_word(action: Action, w: Word, pts) -> np.ndarray:
    """Right-to-left composition: the last letter of w acts first."""
    out = canonical(pts)
    for letter in reversed(w.letters):
        out = action.apply_letter(letter, out)
    return out


@dataclass
class OrbitTable:
    """Images of every ball word on every base point, built incrementally.

    images[i] is the image array of ball word i on all base points; each
    frontier word costs exactly one generator application to its parent's
    images.
    """

    action: Action
    ball: Ball
    base: np.ndarray
    images: np.ndarray  # (n_words, n_points, dim)

    @property
    def entries(self) -> int:
        return self.images.shape[0] * self.images.shape[1]

    def image(self, word_index: int, point_index: int) -> np.ndarray:
        return self.images[word_index, point_index]


def orbit_table(action: Action, b: Ball, points) -> OrbitTable:
    base = canonical(np.atleast_2d(np.asarray(points, dtype=float)))
    n_words = len(b.elements)
    images = np.empty((n_words, base.shape[0], base.shape[1]))
    images[0] = base
    for i in range(1, n_words):
        images[i] = action.apply_letter(b.letters[i], images[b.parents[i]])
    return OrbitTable(action, b, base, images)


# ---------------------------------------------------------------------------
# builders


def make_rotation(alpha: float) -> Action:
    return Action(
        GroupSpec(FREE_ABELIAN, 1), CIRCLE, [Rotation(alpha)], f"rotation:{alpha!r}"
    )


def make_morse_smale(a: float) -> Action:
    return Action(
        GroupSpec(FREE_ABELIAN, 1), CIRCLE, [MorseSmale(a)], f"morse_smale:{a!r}"
    )


def make_cat_map() -> Action:
    return Action(GroupSpec(FREE_ABELIAN, 1), TORUS, [CatMap()], "cat")


def make_blown_up_cat(r0: float = 0.15, r1: float = 0.05) -> Action:
    return Action(
        GroupSpec(FREE_ABELIAN, 1),
        TORUS,
        [BlownUpCat(r0, r1)],
        f"blown_cat:{r0!r},{r1!r}",
    )


def make_identity_action(space: Space = CIRCLE) -> Action:
    return Action(GroupSpec(FREE_ABELIAN, 1), space, [IdentityMap(space)], "identity")


def make_torus_pair() -> Action:
    """Free rank-2 action on the torus: irrational translation + blown-up cat."""
    return Action(
        GroupSpec(FREE, 2),
        TORUS,
        [Translation(TORUS_SHIFT), BlownUpCat(0.15, 0.05)],
        "example_31",
    )


def make_circle_pair() -> Action:
    """Free rank-2 action on the circle: golden rotation + Morse-Smale map."""
    return Action(
        GroupSpec(FREE, 2),
        CIRCLE,
        [Rotation(GOLDEN), MorseSmale(0.1)],
        "example_32",
    )


def conjugate_action(action: Action, h: MapBase) -> Action:
    if h.space.dim != action.space.dim:
        raise ParameterError("conjugating map lives on a different space")
    gens = [ConjugatedMap(h, g) for g in action.gens]
    return Action(action.group, action.space, gens, f"conj({action.name})")


def parse_action_spec(spec: str) -> Action:
    """Build an action from an experiment-config token."""
    spec = spec.strip()
    try:
        if spec == "cat":
            return make_cat_map()
        if spec == "example_31":
            return make_torus_pair()
        if spec == "example_32":
            return make_circle_pair()
        if spec == "identity":
            return make_identity_action()
        if spec.startswith("rotation:"):
            return make_rotation(float(spec.split(":", 1)[1]))
        if spec.startswith("morse_smale:"):
            return make_morse_smale(float(spec.split(":", 1)[1]))
        if spec.startswith("blown_cat:"):
            r0, r1 = (float(t) for t in spec.split(":", 1)[1].split(","))
            return make_blown_up_cat(r0, r1)
    except (ValueError, ParameterError) as exc:
        raise ConfigError(f"bad action spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown action {spec!r}")
