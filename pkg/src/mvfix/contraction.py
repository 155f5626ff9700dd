"""The contraction control triple (zeta, G, C_G) and its class checks.

A family bundles two exactly-evaluable binary expressions and a nonnegative
threshold constant.  Class membership (C-class, the C_G property, and the
comparison condition zeta < G) quantifies over all of [0,inf)^2, which is
undecidable for black-box expressions, so the checks here falsify on grids:
PASS means "no violation on the supplied grid", and reports say so.  The
limit condition is handled separately by evaluating user-supplied sequence
pairs and can only ever be FALSIFIED or NOT-FALSIFIED.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .expressions import Expr, evaluate, parse_expression, unparse
from .hyperspace import exact
from .reports import Witness, make_report

DEFAULT_SEED = 0
_CONTINUITY_NOTE = "continuity of G: declared-not-checked"
_GRID_NOTE = "grid check only: PASS is not a proof over all of [0,inf)^2"


@dataclass(frozen=True)
class ContractionFamily:
    """(zeta, G, C_G): zeta takes (t, s), G takes (s, t), C_G >= 0.

    Class membership is not assumed at construction; run the check_*
    operations to establish it on a grid.
    """

    zeta: Expr
    gfun: Expr
    cg: Fraction

    @classmethod
    def from_exprs(cls, zeta, gfun, cg) -> "ContractionFamily":
        if isinstance(zeta, str):
            zeta = parse_expression(zeta, variables=("t", "s"))
        if isinstance(gfun, str):
            gfun = parse_expression(gfun, variables=("t", "s"))
        cg = exact(cg)
        if cg < 0:
            raise InputError("the threshold constant C_G must be >= 0")
        return cls(zeta=zeta, gfun=gfun, cg=cg)

    def describe(self) -> str:
        return f"zeta={unparse(self.zeta)} g={unparse(self.gfun)} cg={self.cg}"


def builtin_family(lam=Fraction(5, 6)) -> ContractionFamily:
    """The stock family zeta = lam*s - t, G = s - t, C_G = 0 for 0 < lam < 1."""
    lam = exact(lam)
    if not 0 < lam < 1:
        raise InputError("lam must lie strictly between 0 and 1")
    return ContractionFamily.from_exprs(f"{lam} * s - t", "s - t", 0)


def eval_zeta(fam: ContractionFamily, t, s) -> Fraction:
    t, s = exact(t), exact(s)
    if t < 0 or s < 0:
        raise InputError("zeta arguments must be nonnegative")
    return evaluate(fam.zeta, {"t": t, "s": s})


def eval_g(fam: ContractionFamily, s, t) -> Fraction:
    s, t = exact(s), exact(t)
    if t < 0 or s < 0:
        raise InputError("G arguments must be nonnegative")
    return evaluate(fam.gfun, {"s": s, "t": t})


@dataclass(frozen=True)
class Grid:
    """Sample pairs plus the underlying 1-d values, all exact rationals."""

    pairs: tuple[tuple[Fraction, Fraction], ...]
    values: tuple[Fraction, ...]
    description: str

    @classmethod
    def from_values(cls, values, description="explicit") -> "Grid":
        values = tuple(sorted({exact(v) for v in values}))
        if not values:
            raise InputError("grid must be nonempty")
        pairs = tuple((a, b) for a in values for b in values)
        return cls(pairs=pairs, values=values, description=description)


def default_grid(seed: int = DEFAULT_SEED) -> Grid:
    """Lattice {k/8 : 0 <= k <= 64}^2 plus 64 seeded random rational pairs
    with denominators <= 1000."""
    values = [Fraction(k, 8) for k in range(65)]
    rng = random.Random(seed)
    extra_pairs = []
    for _ in range(64):
        q1, q2 = rng.randint(1, 1000), rng.randint(1, 1000)
        extra_pairs.append((Fraction(rng.randint(0, 8 * q1), q1),
                            Fraction(rng.randint(0, 8 * q2), q2)))
    lattice = [(a, b) for a in values for b in values]
    all_values = sorted(set(values) | {v for pair in extra_pairs for v in pair})
    return Grid(pairs=tuple(lattice + sorted(extra_pairs)),
                values=tuple(all_values),
                description=f"default lattice step 1/8 on [0,8] + 64 random pairs (seed {seed})")


def check_c_class(fam: ContractionFamily, grid: Grid | None = None):
    """Check G(s,t) <= s (condition i) and G(s,t) = s => s = 0 or t = 0 (ii).

    Witness values are (s, t).  Continuity is recorded as declared, not
    checked.
    """
    grid = grid or default_grid()
    witnesses = []
    for s, t in grid.pairs:
        g = eval_g(fam, s, t)
        if g > s:
            witnesses.append(Witness("i", (s, t)))
        elif g == s and s != 0 and t != 0:
            witnesses.append(Witness("ii", (s, t)))
    return make_report("c-class", len(grid.pairs), witnesses,
                       notes=(_CONTINUITY_NOTE, _GRID_NOTE, f"grid: {grid.description}"))


def check_property_cg(fam: ContractionFamily, grid: Grid | None = None):
    """Check G(s,t) > C_G => s > t (i, witnesses (s, t)) and
    G(t,t) <= C_G (ii, witnesses (t,))."""
    grid = grid or default_grid()
    witnesses = []
    for s, t in grid.pairs:
        if eval_g(fam, s, t) > fam.cg and not s > t:
            witnesses.append(Witness("i", (s, t)))
    for t in grid.values:
        if eval_g(fam, t, t) > fam.cg:
            witnesses.append(Witness("ii", (t,)))
    return make_report("property-cg", len(grid.pairs) + len(grid.values), witnesses,
                       notes=(_GRID_NOTE, f"grid: {grid.description}"))


def check_zeta_condition_a(fam: ContractionFamily, grid: Grid | None = None):
    """Check zeta(t,s) < G(s,t) strictly at all positive grid pairs;
    witnesses are (t, s)."""
    grid = grid or default_grid()
    witnesses = []
    checked = 0
    for t, s in grid.pairs:
        if t <= 0 or s <= 0:
            continue
        checked += 1
        if not eval_zeta(fam, t, s) < eval_g(fam, s, t):
            witnesses.append(Witness("a", (t, s)))
    return make_report("zeta-condition-a", checked, witnesses,
                       notes=(_GRID_NOTE, f"grid: {grid.description}"))


@dataclass(frozen=True)
class SequencePair:
    """Finite positive sequences t_n < s_n with a declared common limit > 0."""

    ts: tuple[Fraction, ...]
    ss: tuple[Fraction, ...]
    limit: Fraction

    @classmethod
    def build(cls, ts, ss, limit) -> "SequencePair":
        ts = tuple(exact(t) for t in ts)
        ss = tuple(exact(s) for s in ss)
        limit = exact(limit)
        if len(ts) != len(ss):
            raise InputError("sequence pair lengths differ")
        if len(ts) < 2:
            raise InputError("a sequence pair needs at least two terms")
        if limit <= 0:
            raise InputError("the declared limit must be positive")
        for t, s in zip(ts, ss):
            if t <= 0 or s <= 0:
                raise InputError("sequence terms must be positive")
            if not t < s:
                raise InputError(f"malformed sequence: t={t} >= s={s}")
        return cls(ts=ts, ss=ss, limit=limit)


def standard_sequence_pairs(limits=(Fraction(1, 2), Fraction(1), Fraction(3, 2)),
                            length: int = 10_000) -> tuple[SequencePair, ...]:
    """t_n = l - 1/n, s_n = l + 1/n (indices shifted so terms stay positive)."""
    pairs = []
    for limit in limits:
        limit = exact(limit)
        start = int(1 / limit) + 1  # keep t_n > 0
        ts = [limit - Fraction(1, n) for n in range(start, start + length)]
        ss = [limit + Fraction(1, n) for n in range(start, start + length)]
        pairs.append(SequencePair.build(ts, ss, limit))
    return tuple(pairs)


def check_zeta_condition_b(fam: ContractionFamily, seqs, margin=Fraction(0)):
    """Estimate limsup zeta(t_n, s_n) along each pair's tail.

    The estimate (max over the final tenth, at least 8 terms) must be
    < C_G - margin.  Sampling can only ever refute the limit condition, so
    the verdict is FALSIFIED (with the sequence index and estimate as
    witness) or NOT-FALSIFIED — never a proof.
    """
    margin = exact(margin)
    seqs = tuple(seqs)
    if not seqs:
        raise InputError("at least one sequence pair is required")
    witnesses = []
    checked = 0
    for index, pair in enumerate(seqs):
        if not isinstance(pair, SequencePair):
            pair = SequencePair.build(*pair)
        tail = max(8, len(pair.ts) // 10)
        values = [eval_zeta(fam, t, s)
                  for t, s in zip(pair.ts[-tail:], pair.ss[-tail:])]
        checked += len(values)
        estimate = max(values)
        if not estimate < fam.cg - margin:
            witnesses.append(Witness("b", (index, estimate)))
    return make_report("zeta-condition-b", checked, witnesses,
                       notes=("limit property: sampling can falsify, never prove",
                              f"margin {margin}"),
                       falsification=True)
