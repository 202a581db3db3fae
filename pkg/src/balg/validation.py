"""Independent revalidation of emitted certificates.

Reparses the serialized payloads and rechecks every improvement step:
strict order decrease, chain continuity, and preserved upper-bound status.
The upper-bound predicates here are pointwise membership sweeps, written
apart from the cell-logic the certificate generators use; only the element
substrate (algebra operations and the expression grammar) is shared.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Elem, finite_cofinite
from .certificates import DIAGONAL_FAMILY, EVENS_FAMILY
from .expr import parse_element, rectform_from_grid
from .free_product import FreeProduct, RectForm


@dataclass(frozen=True, slots=True)
class ValidationResult:
    ok: bool
    detail: str
    steps_checked: int = 0


def _evens_upper_bound(u: Elem) -> bool:
    """Pointwise: u contains every even number.

    Membership beyond the support horizon is constant, so sweeping the evens
    up to just past the largest support member is exact.
    """
    mode, support = u.data
    horizon = (max(support) if support else 0) + 2
    return all(u.contains(n) for n in range(0, horizon + 1, 2))


def _point_in_grid(x: RectForm, p: int, q: int) -> bool:
    row = None
    for i, c in enumerate(x.left_cells):
        if c.contains(p):
            row = x.rows[i]
            break
    if row is None:
        return False
    for j, c in enumerate(x.right_cells):
        if c.contains(q):
            return bool(row >> j & 1)
    return False


def _diagonal_upper_bound(u: RectForm) -> bool:
    """Pointwise: u contains every diagonal point (n, n).

    Beyond the largest natural named in any cell support, membership of
    (n, n) is constant; one generic point past the horizon decides the tail.
    """
    horizon = 0
    for c in list(u.left_cells) + list(u.right_cells):
        support = c.data[1]
        if support:
            horizon = max(horizon, max(support))
    return all(_point_in_grid(u, n, n) for n in range(horizon + 2))


def validate_certificate(payload: dict) -> ValidationResult:
    """Recheck a serialized certificate step by step."""
    kind = payload.get("kind")
    if kind == "exhaustive_complete":
        ok = payload.get("subsets_checked", 0) >= 1
        return ValidationResult(ok, "exhaustive verdict carries a subset count")
    if kind != "no_supremum":
        return ValidationResult(False, f"unknown certificate kind {kind!r}")
    family = payload.get("family")
    steps = payload.get("steps", [])
    if not steps:
        return ValidationResult(False, "no_supremum certificate without steps")
    if family == EVENS_FAMILY:
        alg = finite_cofinite()
        parse = lambda s: parse_element(alg, s)  # noqa: E731
        is_upper = _evens_upper_bound
    elif family == DIAGONAL_FAMILY:
        fp = FreeProduct(finite_cofinite(), finite_cofinite())
        parse = lambda s: rectform_from_grid(fp, s)  # noqa: E731
        is_upper = _diagonal_upper_bound
    else:
        return ValidationResult(False, f"unknown witness family {family!r}")
    previous_improved = None
    for k, step in enumerate(steps):
        u = parse(step["upper_bound"])
        improved = parse(step["improved"])
        if previous_improved is not None and u != previous_improved:
            return ValidationResult(False, f"step {k}: chain broken", k)
        if not is_upper(u):
            return ValidationResult(False, f"step {k}: start is not an upper bound", k)
        if not improved.leq(u) or improved == u:
            return ValidationResult(False, f"step {k}: no strict decrease", k)
        if not is_upper(improved):
            return ValidationResult(False, f"step {k}: improvement loses the bound", k)
        previous_improved = improved
    return ValidationResult(True, "all steps revalidated", len(steps))
