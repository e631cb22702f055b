"""Discontinuous characters on the dense subgroup Q + Q sqrt(2) of R.

chi(a + b sqrt 2) = exp(2 pi i b) is an exact homomorphism on this
subgroup and is discontinuous for the real topology: the numbers
(sqrt 2 - p/q)/2 built from convergents p/q of sqrt 2 tend to 0 while chi
stays at -1.  Block representations combine such characters with ordinary
continuous phases; their continuous rays form the projective spaces of
mutually orthogonal subspaces, one per character class.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, InvalidRepresentation
from .geometry import riemannian_distance
from .linalg import Ray, as_vector
from .sampling import complex_gaussian, rng_from

PROBE_TOL = 1e-3
_PREC = 60


def _decimal_sqrt2() -> Decimal:
    return Decimal(2).sqrt()


def _dec(q: Fraction) -> Decimal:
    return Decimal(q.numerator) / Decimal(q.denominator)


@dataclass(frozen=True)
class QuadElement:
    """a + b sqrt(2) with rational a, b."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def __add__(self, other: "QuadElement") -> "QuadElement":
        return QuadElement(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QuadElement") -> "QuadElement":
        return QuadElement(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QuadElement":
        return QuadElement(-self.a, -self.b)

    def scale(self, q) -> "QuadElement":
        q = Fraction(q)
        return QuadElement(q * self.a, q * self.b)

    def decimal_value(self) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = _PREC
            return _dec(self.a) + _dec(self.b) * _decimal_sqrt2()

    def real_value(self) -> float:
        """Diagnostics only; evaluated at 60 digits to survive cancellation."""
        return float(self.decimal_value())

    def __repr__(self):
        return f"QuadElement({self.a} + {self.b}*sqrt2)"


def _turns_to_unit(turns: QuadElement) -> complex:
    """exp(2 pi i x) for x = a + b sqrt 2, reduced mod 1 before leaving exact arithmetic."""
    with localcontext() as ctx:
        ctx.prec = _PREC
        frac_a = turns.a - math.floor(turns.a)
        x = _dec(frac_a) + _dec(turns.b) * _decimal_sqrt2()
        x = x - x.to_integral_value(rounding="ROUND_FLOOR")
    return cmath.exp(2j * math.pi * float(x))


def character_phase(t: QuadElement, multiplier: int = 1) -> Fraction:
    """Exponent in turns of chi^multiplier(t), reduced to [0, 1)."""
    x = multiplier * t.b
    return x - math.floor(x)


def character_eval(t: QuadElement, multiplier: int = 1) -> complex:
    x = character_phase(t, multiplier)
    # exact values at the quarter turns keep chi(sqrt2/2) == -1 bit for bit
    exact = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
    if x in exact:
        return exact[x]
    return cmath.exp(2j * math.pi * float(x))


@dataclass(frozen=True)
class Block:
    """A scalar block acting by exp(2 pi i (freq * t + character * b(t))).

    ``freq`` is the rational multiple of 2 pi in the continuous phase
    exp(i theta t); ``character`` = k selects chi^k (k = 0 is continuous).
    """

    dim: int
    freq: Fraction = Fraction(0)
    character: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidRepresentation("block dimension must be positive", dim=self.dim)
        object.__setattr__(self, "freq", Fraction(self.freq))
        object.__setattr__(self, "character", int(self.character))

    @property
    def mode(self) -> str:
        return "continuous" if self.character == 0 else "twisted"

    def turns(self, t: QuadElement) -> QuadElement:
        return t.scale(self.freq) + QuadElement(self.character * t.b, 0)


def continuous_block(dim: int, theta=0) -> Block:
    return Block(dim, Fraction(theta), 0)


def twisted_block(dim: int, character: int = 1, theta=0) -> Block:
    if character == 0:
        raise InvalidRepresentation("a twisted block needs a nonzero character multiplier")
    return Block(dim, Fraction(theta), character)


@dataclass(frozen=True)
class BlockRepresentation:
    blocks: tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks:
            raise InvalidRepresentation("need at least one block")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(b.dim for b in self.blocks)

    def offsets(self) -> list[int]:
        out, o = [], 0
        for b in self.blocks:
            out.append(o)
            o += b.dim
        return out

    def exponents(self, t: QuadElement) -> list[QuadElement]:
        """Exact phase exponents (in turns) of each block."""
        return [b.turns(t) for b in self.blocks]

    def phases(self, t: QuadElement) -> np.ndarray:
        out = []
        for b, e in zip(self.blocks, self.exponents(t)):
            out.extend([_turns_to_unit(e)] * b.dim)
        return np.array(out)

    def matrix(self, t: QuadElement) -> np.ndarray:
        return np.diag(self.phases(t))

    def act(self, t: QuadElement, v) -> np.ndarray:
        v = as_vector(v)
        if v.shape[0] != self.n:
            raise DimensionMismatch("vector dimension differs from representation", dims=[v.shape[0], self.n])
        return self.phases(t) * v


@dataclass(frozen=True)
class NullSequence:
    terms: tuple[QuadElement, ...]
    label: str

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise InvalidRepresentation("a null sequence needs at least one term")
        mags = [abs(t.decimal_value()) for t in terms]
        if any(b >= a for a, b in zip(mags, mags[1:])):
            raise InvalidRepresentation("terms must decrease strictly in absolute value")
        object.__setattr__(self, "terms", terms)

    @property
    def converged(self) -> bool:
        return abs(self.terms[-1].real_value()) < 1e-6


def sqrt2_convergents(count: int) -> list[Fraction]:
    """p/q = 1/1, 3/2, 7/5, 17/12, ... (continued fraction [1; 2, 2, ...])."""
    out = []
    p0, q0, p1, q1 = 1, 0, 1, 1
    for _ in range(count):
        out.append(Fraction(p1, q1))
        p0, q0, p1, q1 = p1, q1, 2 * p1 + p0, 2 * q1 + q0
    return out


def adversarial_null_sequence(length: int = 12, twist=Fraction(1, 2)) -> NullSequence:
    """t_m = twist * (sqrt 2 - p_m/q_m): real value -> 0, chi(t_m) = exp(2 pi i twist) fixed."""
    if length < 1:
        raise ValueError("length must be >= 1")
    twist = Fraction(twist)
    terms = [QuadElement(-twist * c, twist) for c in sqrt2_convergents(length)]
    return NullSequence(tuple(terms), "adversarial")


def tame_null_sequence(length: int = 10) -> NullSequence:
    """t_k = 1/k!, rational, so every character is trivial on it."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return NullSequence(tuple(QuadElement(Fraction(1, math.factorial(k)), 0)
                              for k in range(1, length + 1)), "tame")


def default_sequences(rep: BlockRepresentation, length: int = 12) -> list[NullSequence]:
    """A tame sequence plus an adversarial one whose twist separates every character pair."""
    ks = [b.character for b in rep.blocks]
    spread = max(ks) - min(ks)
    twist = Fraction(1, spread + 1) if spread else Fraction(1, 2)
    return [tame_null_sequence(min(length, 10)), adversarial_null_sequence(length, twist)]


CONTINUOUS = "CONTINUOUS_AT_0"
WITNESS = "DISCONTINUITY_WITNESS"


@dataclass(frozen=True)
class ProbeVerdict:
    label: str
    verdict: str
    tail_sup: float
    tail_min: float
    gaps: tuple[float, ...]


def orbit_continuity_probe(rep: BlockRepresentation, v, sequences=None,
                           tol: float = PROBE_TOL) -> list[ProbeVerdict]:
    """d_R(pi(t_k)[v], [v]) along each null sequence.

    A sequence witnesses discontinuity when the gap exceeds ``tol`` on every
    one of its last ceil(k/2) terms.
    """
    ray = v if isinstance(v, Ray) else Ray(v)
    if ray.dim != rep.n:
        raise DimensionMismatch("ray dimension differs from representation", dims=[ray.dim, rep.n])
    if sequences is None:
        sequences = default_sequences(rep)
    out = []
    for seq in sequences:
        gaps = tuple(riemannian_distance(Ray(rep.act(t, ray.rep)), ray) for t in seq.terms)
        tail = gaps[len(gaps) // 2:]
        verdict = WITNESS if min(tail) > tol else CONTINUOUS
        out.append(ProbeVerdict(seq.label, verdict, max(tail), min(tail), gaps))
    return out


def overall_verdict(verdicts: list[ProbeVerdict]) -> str:
    return WITNESS if any(p.verdict == WITNESS for p in verdicts) else CONTINUOUS


def continuous_ray_components(rep: BlockRepresentation) -> list[np.ndarray]:
    """Orthonormal bases of the subspaces whose rays have continuous orbits.

    Blocks are merged when they carry the same character multiplier: their
    relative phase exp(2 pi i (freq_i - freq_j) t) is continuous in t.
    Distinct multipliers differ by a nontrivial power of chi, which is
    discontinuous, so mixed rays fall outside every component.
    """
    groups: dict[int, list[int]] = {}
    for idx, b in enumerate(rep.blocks):
        groups.setdefault(b.character, []).append(idx)
    offsets = rep.offsets()
    eye = np.eye(rep.n, dtype=complex)
    out = []
    for members in groups.values():
        cols = [o for i in members for o in range(offsets[i], offsets[i] + rep.blocks[i].dim)]
        out.append(eye[:, cols])
    return out


def component_of(components: list[np.ndarray], v, tol: float = 1e-9) -> int | None:
    """Index of the component containing [v], or None for a mixed ray."""
    v = as_vector(v)
    nv = np.linalg.norm(v)
    for i, Q in enumerate(components):
        if np.linalg.norm(v - Q @ (Q.conj().T @ v)) <= tol * nv:
            return i
    return None


def verify_components(rep: BlockRepresentation, rays: int = 50, seed=0) -> dict:
    """Check the structural answer against probe verdicts on random rays.

    Half the rays are drawn inside a random component, half across the whole
    space; a ray is expected continuous exactly when it lies in a component.
    """
    rng = rng_from(seed)
    comps = continuous_ray_components(rep)
    cross = max((float(np.max(np.abs(comps[i].conj().T @ comps[j])))
                 for i in range(len(comps)) for j in range(i + 1, len(comps))), default=0.0)
    agree = 0
    records = []
    seqs = default_sequences(rep)
    for k in range(rays):
        if k % 2 == 0:
            Q = comps[int(rng.integers(len(comps)))]
            v = Q @ complex_gaussian(rng, Q.shape[1])
        else:
            v = complex_gaussian(rng, rep.n)
        expected = CONTINUOUS if component_of(comps, v) is not None else WITNESS
        got = overall_verdict(orbit_continuity_probe(rep, v, seqs))
        agree += expected == got
        records.append((expected, got))
    return {"components": len(comps), "cross_overlap": cross, "rays": rays,
            "agreements": agree, "records": records}


def parse_block(spec: dict) -> Block:
    """JSON block: {"dim": d, "mode": "continuous"|"twisted", "theta": "p/q", "character": k}.

    ``theta`` is the rational multiple of 2 pi in exp(i theta t).
    """
    mode = spec.get("mode", "continuous")
    theta = Fraction(str(spec.get("theta", 0)))
    if mode == "continuous":
        return continuous_block(int(spec["dim"]), theta)
    if mode == "twisted":
        return twisted_block(int(spec["dim"]), int(spec.get("character", 1)), theta)
    raise InvalidRepresentation("unknown block mode", mode=mode)


def block_to_json(b: Block) -> dict:
    d = {"dim": b.dim, "mode": b.mode, "theta": str(b.freq)}
    if b.character:
        d["character"] = b.character
    return d


def orthonormal_component_check(components: list[np.ndarray]) -> float:
    """Largest |<q_i, q_j>| between bases of different components."""
    stacked = np.concatenate(components, axis=1)
    gram = stacked.conj().T @ stacked
    return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))

