"""Feasibility predicate and constructive engine for three-spine caterpillars.

Feasibility is a closed-form residue test (three exception families for
p >= 5, two for p = 3, a parity rule for p = 2).  Construction decomposes the
Cayley digraph of the spine labels into components and realizes an explicit
role pattern on each:

* residue sum p-3: one spine-component pattern in a general model [a,0,b];
* residue sum 2p-3: spine pattern plus one or two mixed regular cycles,
  chosen by the case split on (alpha, beta, gamma);
* residue sum 3p-3: the (p-1,p-1,p-1) identity in the model [a,0,-a];
* p in {2,3}: per-component patterns found by exhaustive enumeration of the
  small blocks, assembled by an exact decomposition of the hair counts.

Shapes the explicit recipes do not reach (residue beta in {0,1} with a large
Y class, and the all-Y-spine corner with an empty X class) fall back to a
completion search; the gap is a known hole in the constructive case walk,
not in the feasibility characterization.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import group, labeling
from .errors import (
    ConstructionError,
    InfeasibleShapeError,
    UnsupportedInstanceError,
)
from .group import Element, GroupParams
from .labeling import HAIR_ROLES, S1, S2, S3, X, Y, Z, Labeling, Shape

E1_BETA_PM2 = "E1_beta_pm2"
E2_Y0 = "E2_Y0"
E3_Y1 = "E3_Y1"
P3_E1 = "P3_E1"
P3_E2 = "P3_E2"
P2_PARITY = "P2_parity"


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    exception: Optional[str] = None
    detail: str = ""


def feasibility(params: GroupParams, shape: Shape) -> FeasibilityVerdict:
    """Decide realizability from the hair counts alone."""
    labeling._check_shape(params, shape)
    if params.order < 4:
        raise UnsupportedInstanceError(
            f"Z_{params.p}^{params.k} is too small for the three-spine analysis"
        )
    p = params.p
    h1, h2, h3 = shape.h
    res = labeling.residues(params, shape)
    a, b, g = res.alpha, res.beta, res.gamma

    if p == 2:
        if h1 % 2 == 0 and h3 % 2 == 0 and h2 % 2 == 1:
            return FeasibilityVerdict(True)
        return FeasibilityVerdict(
            False, P2_PARITY, f"needs |X|,|Z| even and |Y| odd, got {shape.h}"
        )
    if p == 3:
        if (a, g) in ((0, 2), (2, 0)):
            return FeasibilityVerdict(
                False, P3_E1, f"residues (alpha,gamma)=({a},{g}) are never realizable"
            )
        if h2 == 0 and (a, g) in ((1, 2), (2, 1)):
            return FeasibilityVerdict(
                False, P3_E2, f"|Y|=0 with residues (alpha,gamma)=({a},{g})"
            )
        return FeasibilityVerdict(True)

    if b == p - 2 and (a, g) in ((0, p - 1), (p - 1, 0)):
        return FeasibilityVerdict(
            False, E1_BETA_PM2, f"beta={p - 2} with (alpha,gamma)=({a},{g})"
        )
    if h2 == 0 and (a, g) in ((p - 1, p - 2), (p - 2, p - 1)):
        return FeasibilityVerdict(
            False, E2_Y0, f"|Y|=0 with (alpha,gamma)=({a},{g})"
        )
    if h2 == 1 and (a, g) in ((p - 1, p - 3), (p - 3, p - 1)):
        return FeasibilityVerdict(
            False, E3_Y1, f"|Y|=1 with (alpha,gamma)=({a},{g})"
        )
    return FeasibilityVerdict(True)


# --- positional role patterns on p-cycles (p >= 5 machinery) ---------------
#
# A pattern is a tuple of length p; entry m is the role of the vertex at
# position m on the oriented cycle u, u+i, u+2i, ... for the model generator
# i.  Spine patterns carry the markers s1/s2/s3 at the spine positions.


def _rotate(pat: Sequence[str], start: int) -> Tuple[str, ...]:
    start %= len(pat)
    return tuple(pat[-start:] + pat[:-start]) if start else tuple(pat)


def realize_spine_symmetric(p: int, alpha: int, beta: int) -> Tuple[str, ...]:
    """Spine-component pattern in the model [a,0,-a] for 2*alpha+beta = p-3."""
    if alpha < 0 or beta < 0 or 2 * alpha + beta != p - 3:
        raise ValueError(f"need 2*alpha+beta = p-3, got alpha={alpha} beta={beta} p={p}")
    return (S2, S1) + (Y,) * beta + (X, Z) * alpha + (S3,)


def realize_regular_symmetric(p: int, start: int = 0) -> Tuple[str, ...]:
    """One Y then (p-1)/2 consecutive XZ pairs; realizes ((p-1)/2, 1, (p-1)/2)."""
    if p % 2 == 0:
        raise UnsupportedInstanceError("symmetric regular pattern needs odd p")
    return _rotate((Y,) + (X, Z) * ((p - 1) // 2), start)


def realize_spine_skew(p: int, alpha: int, gamma: int, r: int) -> Tuple[str, ...]:
    """Spine pattern in the model [a,0,2a]; realizes (alpha, gamma+r, gamma)."""
    if min(alpha, gamma, r) < 0 or alpha + 2 * gamma + r != p - 3:
        raise ValueError(
            f"need alpha+2*gamma+r = p-3, got ({alpha},{gamma},{r}) for p={p}"
        )
    return (S2, S1, S3) + (Y,) * r + (X,) * alpha + (Z, Y) * gamma


def realize_regular_skew(p: int, j: int, start: int = 0) -> Tuple[str, ...]:
    """j consecutive ZY pairs then p-2j X's; realizes (p-2j, j, j)."""
    if not 0 <= j <= (p - 1) // 2:
        raise ValueError(f"j={j} out of range for p={p}")
    return _rotate((Z, Y) * j + (X,) * (p - 2 * j), start)


def realize_spine_general(p: int, a_prime: int, b_prime: int, variant: str = "base") -> Tuple[str, ...]:
    """Spine pattern in the model [a,0,b] with a = a'*i, b = b'*i.

    base realizes (p-b'-1, b'-a'-1, a'-1); the variants relabel one or two
    vertices (a+b to Y, additionally 2a to Z, or a+b and b+2a to Y) and
    require the beta < gamma < alpha hypothesis (b' < 2a' and a' + b' < p).
    """
    if not 1 <= a_prime < b_prime <= p - 1:
        raise ValueError(f"need 1 <= a' < b' <= p-1, got a'={a_prime} b'={b_prime}")
    pat = (
        [S2]
        + [Z] * (a_prime - 1)
        + [S1]
        + [Y] * (b_prime - a_prime - 1)
        + [S3]
        + [X] * (p - 1 - b_prime)
    )
    if variant == "base":
        return tuple(pat)
    if not (b_prime < 2 * a_prime and a_prime + b_prime < p):
        raise ValueError(
            f"variant {variant} needs beta<gamma<alpha (b'<2a' and a'+b'<p)"
        )
    assert pat[a_prime + b_prime] == X
    pat[a_prime + b_prime] = Y
    if variant == "plus_y":
        return tuple(pat)
    if variant == "swap_z":
        assert pat[2 * a_prime] == X
        pat[2 * a_prime] = Z
        return tuple(pat)
    if variant == "double_y":
        if b_prime + 2 * a_prime < p + 1:
            raise ValueError("double_y needs b'+2a' >= p+1")
        pos = b_prime + 2 * a_prime - p
        assert pat[pos] == Z
        pat[pos] = Y
        return tuple(pat)
    raise ValueError(f"unknown variant {variant!r}")


def realize_regular_general(p: int, a_prime: int, b_prime: int, start: int = 0) -> Tuple[str, ...]:
    """Regular-cycle pattern realizing (p-b', b'-a', a'+1) counts, i.e. one more
    of each role than the base spine pattern."""
    if not 1 <= a_prime < b_prime <= p - 1:
        raise ValueError(f"need 1 <= a' < b' <= p-1, got a'={a_prime} b'={b_prime}")
    pat = (X,) + (Z,) * a_prime + (Y,) * (b_prime - a_prime) + (X,) * (p - 1 - b_prime)
    return _rotate(pat, start)


def pattern_counts(pat: Sequence[str]) -> Tuple[int, int, int]:
    return (pat.count(X), pat.count(Y), pat.count(Z))


class _NoRecipe(Exception):
    """Internal: the explicit case machinery does not cover this shape."""


@dataclass(frozen=True)
class ComponentPlan:
    """Blueprint for assembling a labeling out of per-component patterns."""

    model: Tuple[Element, Element]
    generator: Element
    spine_pattern: Tuple[str, ...]
    mixed: Tuple[Tuple[str, ...], ...]
    uniform: Dict[str, int]
    reflected: bool

    @property
    def spine_triple(self) -> Tuple[int, int, int]:
        return pattern_counts(self.spine_pattern)

    @property
    def mixed_triples(self) -> List[Tuple[int, int, int]]:
        return [pattern_counts(p) for p in self.mixed]

    def to_debug_dict(self) -> dict:
        return {
            "model": [list(self.model[0]), list(self.model[1])],
            "generator": list(self.generator),
            "reflected": self.reflected,
            "spine": {"pattern": list(self.spine_pattern), "triple": list(self.spine_triple)},
            "mixed": [
                {"pattern": list(p), "triple": list(t)}
                for p, t in zip(self.mixed, self.mixed_triples)
            ],
            "uniform": dict(self.uniform),
        }


def _finish_plan(params, h, a_prime, b_prime, spine, mixed, reflected) -> ComponentPlan:
    """Attach uniform fill counts; reject plans whose totals cannot meet h."""
    p = params.p
    totals = [0, 0, 0]
    for pat in [spine] + list(mixed):
        for t, c in zip(range(3), pattern_counts(pat)):
            totals[t] += c
    uniform: Dict[str, int] = {}
    for role, total, want in zip(HAIR_ROLES, totals, h):
        rem = want - total
        if rem < 0 or rem % p:
            raise _NoRecipe(f"plan totals {totals} cannot be filled to {h}")
        uniform[role] = rem // p
    n_regular = params.order // p - 1
    if len(mixed) + sum(uniform.values()) != n_regular:
        raise _NoRecipe("component count mismatch")
    e1 = group.basis_vector(params, 0)
    model = (group.scale(params, a_prime, e1), group.scale(params, b_prime, e1))
    return ComponentPlan(model, e1, tuple(spine), tuple(mixed), uniform, reflected)


def plan_components(params: GroupParams, shape: Shape) -> ComponentPlan:
    """Select model and per-component triples for a feasible shape, p >= 5.

    Raises _NoRecipe when the explicit case machinery does not apply (the
    caller then runs the completion-search fallback).
    """
    p = params.p
    h = shape.h
    res = labeling.residues(params, shape)
    a, b, g = res.as_tuple()
    total = a + b + g

    if total == p - 3:
        ap, bp = g + 1, p - 1 - a
        spine = realize_spine_general(p, ap, bp, "base")
        return _finish_plan(params, h, ap, bp, spine, [], False)

    if total == 3 * p - 3:
        spine = realize_spine_symmetric(p, 0, p - 3)
        mixed = [realize_regular_symmetric(p)] * 2
        return _finish_plan(params, h, 1, p - 1, spine, mixed, False)

    # total == 2p-3 from here on
    if a == g:
        # beta is odd in this branch
        spine = realize_spine_symmetric(p, (p - 2 - b) // 2, b - 1)
        mixed = [realize_regular_symmetric(p)]
        return _finish_plan(params, h, 1, p - 1, spine, mixed, False)

    if b >= g:
        return _plan_skew(params, h, a, b, g, reflected=False)
    if b >= a:
        return _plan_skew(params, h[::-1], g, b, a, reflected=True)
    return _plan_general(params, h, a, b, g)


def _plan_skew(params, h, a, b, g, reflected) -> ComponentPlan:
    """Model [a,0,2a] cases (beta >= gamma after optional reflection)."""
    p = params.p
    if (a, b, g) == (p - 2, p - 1, 0):
        return _plan_skew(params, h[::-1], 0, p - 1, p - 2, not reflected)
    if (a, b, g) == (p - 3, p - 1, 1):
        return _plan_skew(params, h[::-1], 1, p - 1, p - 3, not reflected)
    r = b - g
    if g <= (p - 1) // 2 and r <= p - 3:
        spine = realize_spine_skew(p, p - 3 - r, 0, r)
        mixed = [realize_regular_skew(p, g)]
        return _finish_plan(params, h, 1, 2, spine, mixed, reflected)
    if g >= (p + 1) // 2:
        if a > 0:
            spine = realize_spine_skew(p, a - 1, g - (p - 1) // 2, r)
            mixed = [realize_regular_skew(p, (p - 1) // 2)]
            return _finish_plan(params, h, 1, 2, spine, mixed, reflected)
        # (0, p-1, p-2): three-component identity, needs |X| >= p
        if h[0] >= p:
            spine = realize_spine_skew(p, p - 4, 0, 1)
            mixed = [
                realize_regular_skew(p, (p - 1) // 2),
                realize_regular_skew(p, (p - 3) // 2),
            ]
            return _finish_plan(params, h, 1, 2, spine, mixed, reflected)
        raise _NoRecipe("(0,p-1,p-2) with empty X class")
    raise _NoRecipe(f"skew case gap at residues ({a},{b},{g})")


def _plan_general(params, h, a, b, g) -> ComponentPlan:
    """Model [a,0,b] parity decomposition (beta < alpha and beta < gamma)."""
    p = params.p
    reflected = False
    if a < g:
        a, g, h, reflected = g, a, h[::-1], True
    if a % 2 and b % 2 and g % 2:
        ap_, bp_, gp_ = (a - 1) // 2, (b - 1) // 2, (g - 1) // 2
        variant = "base"
    elif g % 2:
        if b < 2:
            raise _NoRecipe("beta' would be negative")
        ap_, bp_, gp_ = a // 2, (b - 2) // 2, (g - 1) // 2
        variant = "plus_y"
    elif a % 2:
        if b < 2:
            raise _NoRecipe("beta' would be negative")
        ap_, bp_, gp_ = (a + 1) // 2, (b - 2) // 2, (g - 2) // 2
        variant = "swap_z"
    else:
        if b < 3:
            raise _NoRecipe("beta' would be negative")
        ap_, bp_, gp_ = a // 2, (b - 3) // 2, g // 2
        variant = "double_y"
    a_prime, b_prime = gp_ + 1, p - 1 - ap_
    try:
        spine = realize_spine_general(p, a_prime, b_prime, variant)
        mixed = [realize_regular_general(p, a_prime, b_prime)]
    except ValueError as exc:
        raise _NoRecipe(str(exc))
    return _finish_plan(params, h, a_prime, b_prime, spine, mixed, reflected)


def _assemble_plan(params: GroupParams, h: Tuple[int, int, int], plan: ComponentPlan) -> Labeling:
    """Instantiate a ComponentPlan as a labeling of the (working) shape h."""
    i = plan.generator
    comps = group.cosets(params, group.span(params, [i]), generators=[i])
    part: Dict[Element, str] = {}
    for pos, role in enumerate(plan.spine_pattern):
        part[comps[0][pos]] = role
    regs = comps[1:]
    for pat, comp in zip(plan.mixed, regs):
        for pos, role in enumerate(pat):
            part[comp[pos]] = role
    at = len(plan.mixed)
    for role in HAIR_ROLES:
        for _ in range(plan.uniform[role]):
            for v in regs[at]:
                part[v] = role
            at += 1
    shape = labeling.make_shape(params, h)
    return labeling.partition_to_labeling(params, shape, part)


# --- small-group machinery: enumerate per-component patterns ----------------


@functools.lru_cache(maxsize=None)
def _component_patterns(
    params: GroupParams,
    a: Element,
    b: Element,
    cells: Tuple[Element, ...],
    spine: bool,
) -> Dict[Tuple[int, int, int], Dict[Element, str]]:
    """All realizable role-count triples on one component, with one
    representative FA-clean assignment each (first in lex enumeration order).

    For spine components the cells include a, 0, b (kept unlabeled) and the
    absolute rules at b-a / a-b apply; regular components see only the
    relative rules and may be translated to any coset afterwards.
    """
    zero = params.zero
    spine_cells = {a, zero, b} if spine else set()
    free = tuple(c for c in sorted(cells) if c not in spine_cells)
    cell_set = set(cells)
    b_minus_a = group.sub(params, b, a)
    a_minus_b = group.sub(params, a, b)
    step = {
        c: (
            group.add(params, c, a),
            group.add(params, c, b),
            group.add(params, c, b_minus_a),
        )
        for c in free
    }
    for c in free:
        assert all(s in cell_set for s in step[c])

    out: Dict[Tuple[int, int, int], Dict[Element, str]] = {}
    for roles in itertools.product(HAIR_ROLES, repeat=len(free)):
        assign = dict(zip(free, roles))
        if spine and (assign.get(b_minus_a) == X or assign.get(a_minus_b) == Z):
            continue
        ok = True
        for c, role in assign.items():
            plus_a, plus_b, plus_ba = step[c]
            if role == X and assign.get(plus_a) == Y:
                ok = False
                break
            if role == Z and (assign.get(plus_b) == Y or assign.get(plus_ba) == X):
                ok = False
                break
        if not ok:
            continue
        triple = (roles.count(X), roles.count(Y), roles.count(Z))
        out.setdefault(triple, assign)
    return out


def _decompose(
    target: Tuple[int, int, int],
    triples: Sequence[Tuple[int, int, int]],
    blocks: int,
) -> Optional[List[Tuple[int, int, int]]]:
    """Write target as a sum of exactly ``blocks`` triples from the menu."""
    menu = sorted(triples)
    failed = set()

    def rec(i: int, left: int, t: Tuple[int, int, int]):
        if t == (0, 0, 0) and left == 0:
            return []
        if i == len(menu) or left == 0:
            return None
        key = (i, left, t)
        if key in failed:
            return None
        tri = menu[i]
        hi = left
        for t_c, tri_c in zip(t, tri):
            if tri_c:
                hi = min(hi, t_c // tri_c)
        for c in range(hi, -1, -1):
            rest = rec(i + 1, left - c, tuple(v - c * w for v, w in zip(t, tri)))
            if rest is not None:
                return [tri] * c + rest
        failed.add(key)
        return None

    return rec(0, blocks, tuple(target))


def _construct_by_blocks(params: GroupParams, shape: Shape, a: Element, b: Element) -> Optional[Labeling]:
    """Complete per-model decision procedure via block enumeration + exact
    decomposition of the hair counts.  None means unrealizable in this model."""
    subgroup = group.span(params, [a, b])
    comps = group.cosets(params, subgroup)
    spine_menu = _component_patterns(params, a, b, tuple(comps[0]), True)
    reg_menu = _component_patterns(params, a, b, tuple(subgroup), False)
    n_regular = len(comps) - 1
    for s in sorted(spine_menu):
        rest = tuple(hv - sv for hv, sv in zip(shape.h, s))
        if any(v < 0 for v in rest):
            continue
        blocks = _decompose(rest, list(reg_menu), n_regular)
        if blocks is None:
            continue
        part: Dict[Element, str] = {a: S1, params.zero: S2, b: S3}
        part.update(spine_menu[s])
        for tri, comp in zip(blocks, comps[1:]):
            rep = min(comp)
            for cell, role in reg_menu[tri].items():
                part[group.add(params, rep, cell)] = role
        return labeling.partition_to_labeling(params, shape, part)
    return None


def small_p_patterns(params: GroupParams, shape: Shape) -> Labeling:
    """Constructions for p in {2,3}: spine-block plus 4- or 9-block patterns."""
    p = params.p
    if p not in (2, 3):
        raise UnsupportedInstanceError("small_p_patterns handles p in {2,3} only")
    verdict = feasibility(params, shape)
    if not verdict.feasible:
        raise InfeasibleShapeError(verdict)
    e1 = group.basis_vector(params, 0)
    models: List[Tuple[Element, Element]] = []
    if p == 3:
        models.append((e1, group.scale(params, 2, e1)))
    models.append((e1, group.basis_vector(params, 1)))
    for a, b in models:
        lab = _construct_by_blocks(params, shape, a, b)
        if lab is not None:
            return lab
    raise ConstructionError(f"no small-p decomposition found for {shape.h}")


def _fallback(params: GroupParams, shape: Shape) -> Labeling:
    """Completion search for feasible shapes outside the explicit recipes."""
    from . import oracle  # local import to avoid a module cycle

    e1 = group.basis_vector(params, 0)
    # complete per-model decision over the cyclic models first
    if params.p <= 13:
        for m in range(2, params.p):
            lab = _construct_by_blocks(params, shape, e1, group.scale(params, m, e1))
            if lab is not None:
                return lab
    if params.k >= 2:
        verdict = oracle.search(
            params,
            shape,
            budget=oracle.SearchBudget(node_limit=20_000_000),
            models=[(e1, group.basis_vector(params, 1))],
        )
        if verdict.outcome == oracle.FOUND:
            return verdict.labeling
    raise ConstructionError(
        f"completion search found no labeling for shape {shape.h} "
        f"over Z_{params.p}^{params.k}"
    )


def construct(params: GroupParams, shape: Shape) -> Labeling:
    """Produce a verified labeling for any feasible shape (deterministic)."""
    verdict = feasibility(params, shape)
    if not verdict.feasible:
        raise InfeasibleShapeError(verdict)
    if params.p in (2, 3):
        lab = small_p_patterns(params, shape)
    else:
        try:
            plan = plan_components(params, shape)
            h = shape.h[::-1] if plan.reflected else shape.h
            lab = _assemble_plan(params, h, plan)
            if plan.reflected:
                lab = labeling.reflect(params, lab)
        except _NoRecipe:
            lab = _fallback(params, shape)
    report = labeling.verify(params, shape, lab)
    if not report.valid:
        raise ConstructionError(f"internal: construction failed verification: {report}")
    return lab
