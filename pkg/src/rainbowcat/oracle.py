"""Exhaustive ground truth: backtracking over role partitions.

For a fixed spine model [a,0,b] every free element takes one of the roles
x/y/z.  Role x at v puts a+v on an edge, y puts v, z puts b+v; the two spine
edges put a and b.  A labeling is valid iff all these edge labels are
distinct, so the search keeps a bitmask of consumed labels plus remaining
role quotas and assigns the most constrained element first.  Translation plus
group automorphisms reduce the spine models to a canonical family.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import group, labeling
from .errors import InconsistentSeedError
from .group import Element, GroupParams
from .labeling import Labeling, Shape


@dataclass(frozen=True)
class SearchBudget:
    timeout_ms: Optional[int] = None
    node_limit: Optional[int] = None


FOUND = "found"
INFEASIBLE = "infeasible"
BUDGETED = "budgeted"


@dataclass
class OracleVerdict:
    outcome: str
    labeling: Optional[Labeling] = None
    nodes: int = 0
    models_tried: List[Tuple[Element, Element]] = field(default_factory=list)
    elapsed_ms: float = 0.0


def canonical_models(params: GroupParams) -> List[Tuple[Element, Element]]:
    """Spine models [a,0,b] sufficient up to translation and automorphism:
    (e1, m*e1) for m in [2, p-1], plus the independent pair (e1, e2) when k >= 2."""
    e1 = group.basis_vector(params, 0)
    models = [(e1, group.scale(params, m, e1)) for m in range(2, params.p)]
    if params.k >= 2:
        models.append((e1, group.basis_vector(params, 1)))
    return models


def naive_models(params: GroupParams) -> List[Tuple[Element, Element]]:
    """Translated forms (a1-a2, a3-a2) of every distinct spine triple.
    Used only to validate the canonical reduction."""
    out = []
    elems = group.elements(params)
    for a1 in elems:
        for a2 in elems:
            if a2 == a1:
                continue
            for a3 in elems:
                if a3 == a1 or a3 == a2:
                    continue
                out.append((group.sub(params, a1, a2), group.sub(params, a3, a2)))
    return out


class _Budget:
    def __init__(self, budget: Optional[SearchBudget]):
        budget = budget or SearchBudget()
        self.deadline = (
            time.monotonic() + budget.timeout_ms / 1000.0
            if budget.timeout_ms is not None
            else None
        )
        self.node_limit = budget.node_limit
        self.nodes = 0
        self.exhausted = False

    def tick(self) -> bool:
        """Count a node; True when the budget is gone."""
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.exhausted = True
        elif self.deadline is not None and self.nodes % 256 == 0:
            if time.monotonic() > self.deadline:
                self.exhausted = True
        return self.exhausted


def _search_model(
    params: GroupParams,
    shape: Shape,
    a: Element,
    b: Element,
    budget: _Budget,
    seed: Optional[Dict[Element, str]] = None,
) -> Optional[Dict[Element, str]]:
    """Backtracking over one model; returns a full role partition or None.

    None means exhausted unless budget.exhausted was set.  Variable order is
    most-constrained-first with canonical-order ties; roles are tried x,y,z.
    """
    zero = params.zero
    idx = params.index
    n = params.order

    consumed = (1 << idx(a)) | (1 << idx(b))
    if consumed.bit_count() != 2:
        return None  # degenerate model (a == b)

    free: List[Element] = [v for v in group.elements(params) if v not in (zero, a, b)]
    # label index consumed by assigning role r to v
    lab_bit = {
        v: (
            1 << idx(group.add(params, a, v)),
            1 << idx(v),
            1 << idx(group.add(params, b, v)),
        )
        for v in free
    }
    quotas = list(shape.h)
    assigned: Dict[Element, int] = {}

    if seed:
        for v, role in seed.items():
            r = labeling.HAIR_ROLES.index(role)
            bit = lab_bit[v][r]
            if consumed & bit or quotas[r] == 0:
                raise InconsistentSeedError(f"seed role {role} at {v} conflicts")
            consumed |= bit
            quotas[r] -= 1
            assigned[v] = r
    unassigned = [v for v in free if v not in assigned]

    def backtrack(consumed: int) -> bool:
        if not unassigned:
            return True
        # MRV scan; also fail if some needed role has no remaining home.
        best_v = None
        best_roles: Tuple[int, ...] = ()
        role_homes = [0, 0, 0]
        for v in unassigned:
            bits = lab_bit[v]
            legal = tuple(
                r for r in range(3) if quotas[r] > 0 and not (consumed & bits[r])
            )
            if not legal:
                return False
            for r in legal:
                role_homes[r] += 1
            if best_v is None or len(legal) < len(best_roles):
                best_v, best_roles = v, legal
        for r in range(3):
            if quotas[r] > 0 and role_homes[r] < quotas[r]:
                return False

        unassigned.remove(best_v)
        bits = lab_bit[best_v]
        for r in best_roles:
            if budget.tick():
                break
            quotas[r] -= 1
            assigned[best_v] = r
            if backtrack(consumed | bits[r]):
                return True
            quotas[r] += 1
            del assigned[best_v]
        unassigned.append(best_v)
        return False

    if backtrack(consumed):
        part: Dict[Element, str] = {a: labeling.S1, zero: labeling.S2, b: labeling.S3}
        for v, r in assigned.items():
            part[v] = labeling.HAIR_ROLES[r]
        return part
    return None


def search(
    params: GroupParams,
    shape: Shape,
    budget: Optional[SearchBudget] = None,
    symmetry: bool = True,
    models: Optional[Sequence[Tuple[Element, Element]]] = None,
) -> OracleVerdict:
    """Decide realizability of the shape by exhaustive search over spine models."""
    labeling._check_shape(params, shape)
    start = time.monotonic()
    state = _Budget(budget)
    if models is None:
        models = canonical_models(params) if symmetry else naive_models(params)
    tried: List[Tuple[Element, Element]] = []
    for a, b in models:
        tried.append((a, b))
        part = _search_model(params, shape, a, b, state)
        if part is not None:
            lab = labeling.partition_to_labeling(params, shape, part)
            return OracleVerdict(FOUND, lab, state.nodes, tried, _ms(start))
        if state.exhausted:
            return OracleVerdict(BUDGETED, None, state.nodes, tried, _ms(start))
    return OracleVerdict(INFEASIBLE, None, state.nodes, tried, _ms(start))


def complete(
    params: GroupParams,
    model: Tuple[Element, Element],
    partial: Dict[Element, str],
    quotas: Sequence[int],
    budget: Optional[SearchBudget] = None,
) -> OracleVerdict:
    """Completion search from a seeded partial partition (constructor fallback).

    ``partial`` maps free elements to hair roles; ``quotas`` are the total
    target hair counts including the seeded ones.
    """
    shape = labeling.make_shape(params, quotas)
    start = time.monotonic()
    state = _Budget(budget)
    a, b = model
    part = _search_model(params, shape, a, b, state, seed=partial)
    if part is not None:
        lab = labeling.partition_to_labeling(params, shape, part)
        return OracleVerdict(FOUND, lab, state.nodes, [model], _ms(start))
    outcome = BUDGETED if state.exhausted else INFEASIBLE
    return OracleVerdict(outcome, None, state.nodes, [model], _ms(start))


def all_shapes(params: GroupParams) -> List[Shape]:
    """All hair-count triples summing to p^k - 3, lexicographic."""
    total = params.order - 3
    return [
        labeling.make_shape(params, (h1, h2, total - h1 - h2))
        for h1 in range(total + 1)
        for h2 in range(total - h1 + 1)
    ]


def table_row(
    params: GroupParams,
    shape: Shape,
    budget: Optional[SearchBudget] = None,
    cross_check: bool = True,
) -> dict:
    """One feasibility-table row (JSON-lines schema)."""
    from . import constructor  # local import: constructor uses this module's engine

    verdict = constructor.feasibility(params, shape)
    row: dict = {"h": list(shape.h)}
    row["predicate"] = (
        "feasible" if verdict.feasible else f"infeasible:{verdict.exception}"
    )
    oracle_verdict = search(params, shape, budget)
    row["oracle"] = oracle_verdict.outcome
    if oracle_verdict.outcome == BUDGETED or not cross_check:
        row["agree"] = None
    else:
        row["agree"] = verdict.feasible == (oracle_verdict.outcome == FOUND)
    row["nodes"] = oracle_verdict.nodes
    row["ms"] = round(oracle_verdict.elapsed_ms, 3)
    return row


def enumerate_table(
    params: GroupParams,
    budget_per_shape: Optional[SearchBudget] = None,
    cross_check: bool = True,
) -> Iterable[dict]:
    """Feasibility table rows (JSON-lines schema), one per shape."""
    for shape in all_shapes(params):
        yield table_row(params, shape, budget_per_shape, cross_check)


def _ms(start: float) -> float:
    return (time.monotonic() - start) * 1000.0
