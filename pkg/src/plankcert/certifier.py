"""Bang sums, peeling-order search, and peeling certificates.

A certificate records, for each plank in a peeling order, the body before and
after removing it, the shrink factor ``rho`` of the peeled direction, width
tables at every not-yet-peeled direction, and (when ``0 < rho < 1``) a
dilation witness: a boundary point ``p`` such that the body shrunk by ``rho``
about ``p`` fits inside the residual.  Those pieces give the inequality chain

    B_m = r_m + rho_m * B_{m+1},   r_m = w_m / width(X_{m-1}, v_m),

ending with ``B = r`` at the step that empties the residual, and ``B_1`` is a
lower bound on the Bang sum that is at least 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .configurations import random_rational_direction
from .coverage import DEFAULT_CELL_BUDGET, ResidualKind, convex_residual, covers
from .errors import (
    BudgetExceeded,
    CaseMismatch,
    InvalidOrder,
    NoOrder,
    NotCovered,
    PlankError,
    WitnessFailure,
)
from .geometry import (
    ConvexBody,
    HalfSpace,
    containment_slacks,
    dilate_about,
    dot,
    empty_like,
    neg,
    support,
    support_point,
    width,
)
from .numeric import simplify
from .planks import INF, Plank, bang_ratio

DEFAULT_SAMPLES = 32
DEFAULT_SAMPLE_SEED = 0
DEFAULT_SEARCH_BUDGET = 10**6


def bang_sum(body: ConvexBody, planks):
    total = body.backend.coerce(0)
    for p in planks:
        r = bang_ratio(p, body)
        if r == INF:
            return INF
        total = total + r
    return simplify(total)


@dataclass(frozen=True)
class DilationWitness:
    h1: HalfSpace
    h2: HalfSpace
    p: tuple
    rho: object
    containment_margin: object


@dataclass(frozen=True)
class PeelStep:
    plank_index: int
    body_before: ConvexBody
    body_after: ConvexBody
    empty: bool
    rho: object
    ratio: object
    widths_before: dict
    widths_after: dict
    samples_before: tuple
    samples_after: tuple
    dilation: DilationWitness | None = None


@dataclass
class Certificate:
    order: tuple
    steps: list
    bang_sum: object
    chain_bound: object
    verified: bool
    backend: str
    tolerance: float
    sample_seed: int = DEFAULT_SAMPLE_SEED
    sample_directions: tuple = ()
    diagnostics: list = field(default_factory=list)


@dataclass(frozen=True)
class Verification:
    ok: bool
    diagnostics: tuple = ()

    def __bool__(self):
        return self.ok


def sample_directions(dim: int, count: int, seed: int, backend) -> tuple:
    rng = random.Random(seed)
    return tuple(backend.vector(random_rational_direction(rng, dim)) for _ in range(count))


def _canonical_optimum(body: ConvexBody, objective):
    """Optimal vertex of ``objective`` over the body.

    Float: the solver's vertex.  Rational: the lexicographically smallest
    optimal point, found by minimizing the coordinates one at a time.
    """
    res = support_point(body, objective)
    if not body.backend.exact:
        return res.x
    bk = body.backend
    face = body.with_halfspaces([HalfSpace(neg(objective), -res.value)])
    point = []
    for i in range(body.dim):
        e = tuple(bk.coerce(1 if k == i else 0) for k in range(body.dim))
        low = -support(face, neg(e))
        point.append(low)
        face = face.with_halfspaces([HalfSpace(e, low)])
    return tuple(point)


def dilation_witness(body_before: ConvexBody, body_after: ConvexBody, p: Plank) -> DilationWitness:
    """Witness that the body shrunk by ``rho`` about a boundary point fits in the residual."""
    bk = body_before.backend
    tol = bk.eps
    u = bk.vector(p.normal.unit)
    hi_x = support(body_after, u)
    lo_x = -support(body_after, neg(u))
    w_after = hi_x - lo_x
    w_before = width(body_before, u)
    if not (w_after > tol and w_after < w_before - tol):
        raise CaseMismatch(f"need 0 < width after ({w_after}) < width before ({w_before})")
    lo, hi = bk.coerce(p.lo), bk.coerce(p.hi)
    if lo - tol <= lo_x <= hi + tol and hi_x > hi + tol:
        h1 = HalfSpace(u, hi_x)
        h2 = HalfSpace(neg(u), -lo_x)
        objective = u
    elif lo - tol <= hi_x <= hi + tol and lo_x < lo - tol:
        h1 = HalfSpace(neg(u), -lo_x)
        h2 = HalfSpace(u, hi_x)
        objective = neg(u)
    else:
        raise CaseMismatch("no supporting hyperplane of the residual lies inside the plank")
    point = _canonical_optimum(body_before, objective)
    rho = w_after / w_before
    dilated = dilate_about(body_before, point, rho)
    margin = min(containment_slacks(body_after, dilated))
    return DilationWitness(h1, h2, point, rho, margin)


def _validate_order(order, k):
    order = tuple(int(i) for i in order)
    if sorted(order) != list(range(k)):
        raise InvalidOrder(f"order {list(order)} is not a permutation of 0..{k - 1}")
    return order


def _build_step(current, planks, order, m, dirs):
    bk = current.backend
    idx = order[m]
    p = planks[idx]
    res = convex_residual(current, p)
    if res.kind is ResidualKind.NOT_CONVEX:
        raise InvalidOrder(f"removing plank {idx} at step {m + 1} leaves a non-convex residual", step=m)
    live = order[m:]
    w_before = {i: width(current, planks[i].normal.unit) for i in live}
    s_before = tuple(width(current, d) for d in dirs)
    wb = w_before[idx]
    flat = wb <= bk.eps
    ratio = INF if flat else bk.coerce(p.width) / wb
    if res.kind is ResidualKind.EMPTY:
        return PeelStep(idx, current, empty_like(current), True, bk.coerce(0), ratio, w_before, {}, s_before, ())
    after = res.body
    w_after = {i: width(after, planks[i].normal.unit) for i in live}
    s_after = tuple(width(after, d) for d in dirs)
    rho = bk.coerce(1) if flat else w_after[idx] / wb
    witness = None
    if rho < 1 - bk.eps:
        witness = dilation_witness(current, after, p)
    return PeelStep(idx, current, after, False, rho, ratio, w_before, w_after, s_before, s_after, witness)


def chain_bound(steps):
    """Backward reconstruction of the lower bound on the Bang sum."""
    bound = 0
    for step in reversed(steps):
        if step.ratio == INF:
            bound = INF
        elif step.empty:
            bound = step.ratio
        else:
            bound = step.ratio + step.rho * bound
    return bound


def step_diagnostics(step: PeelStep, m: int, tol, eps):
    """Violated width inequalities, emptying bounds and dilation margins for one step."""
    bad = []
    if step.empty:
        if step.ratio != INF and step.ratio < 1 - tol:
            bad.append(f"empty_ratio[step={m}]: ratio {step.ratio} < 1")
        return bad
    if step.ratio != INF and step.rho < 1 - step.ratio - tol:
        bad.append(f"rho_floor[step={m}]: rho {step.rho} < 1 - {step.ratio}")
    for i, wb in step.widths_before.items():
        wa = step.widths_after.get(i)
        if wa is None:
            bad.append(f"width_table[step={m},plank={i}]: missing after-width")
            continue
        if wa < step.rho * wb - tol:
            bad.append(f"shrink[step={m},plank={i}]: {wa} < rho*{wb}")
        if wb > eps and wa <= eps:
            bad.append(f"width_collapse[step={m},plank={i}]: residual width collapsed to {wa}")
    for j, (wb, wa) in enumerate(zip(step.samples_before, step.samples_after)):
        if wa < step.rho * wb - tol:
            bad.append(f"shrink_sample[step={m},dir={j}]: {wa} < rho*{wb}")
    if step.dilation is not None and step.dilation.containment_margin < -tol:
        bad.append(f"containment[step={m}]: margin {step.dilation.containment_margin}")
    return bad


def certify(
    body: ConvexBody,
    planks,
    order,
    samples: int = DEFAULT_SAMPLES,
    sample_seed: int = DEFAULT_SAMPLE_SEED,
) -> Certificate:
    """Build and check the peeling certificate for ``order``."""
    planks = list(planks)
    order = _validate_order(order, len(planks))
    bk = body.backend
    tol = bk.eps
    dirs = sample_directions(body.dim, samples, sample_seed, bk)
    steps = []
    current = body
    for m in range(len(order)):
        step = _build_step(current, planks, order, m, dirs)
        if step.dilation is not None and step.dilation.containment_margin < -tol:
            raise WitnessFailure(f"dilated body sticks out of the residual at step {m + 1}")
        steps.append(step)
        if step.empty:
            break
        current = step.body_after
    else:
        raise NotCovered("the residual is still nonempty after peeling every plank")
    diagnostics = []
    for m, step in enumerate(steps):
        diagnostics += step_diagnostics(step, m, tol, bk.eps)
    bound = chain_bound(steps)
    total = bang_sum(body, planks)
    if bound < 1 - tol:
        diagnostics.append(f"chain_bound: {bound} < 1")
    if total < bound - tol:
        diagnostics.append(f"bang_sum: {total} below chain bound {bound}")
    return Certificate(
        order=order,
        steps=steps,
        bang_sum=total,
        chain_bound=bound,
        verified=not diagnostics,
        backend=bk.name,
        tolerance=tol,
        sample_seed=sample_seed,
        sample_directions=dirs,
        diagnostics=diagnostics,
    )


def find_peeling_order(
    body: ConvexBody,
    planks,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
    cell_budget: int = DEFAULT_CELL_BUDGET,
):
    """Lexicographically first order whose partial residuals are all convex.

    Backtracking with memoization: the residual depends only on the set of
    planks removed, so a set that once led to a dead end is never revisited.
    """
    planks = list(planks)
    if not covers(body, planks, cell_budget):
        raise NotCovered("the planks do not cover the body")
    k = len(planks)
    dead = set()
    nodes = 0

    def search(current, prefix, used):
        nonlocal nodes
        for idx in range(k):
            if idx in used:
                continue
            nodes += 1
            if nodes > search_budget:
                raise BudgetExceeded(f"peeling search exceeded {search_budget} nodes")
            res = convex_residual(current, planks[idx])
            if res.kind is ResidualKind.NOT_CONVEX:
                continue
            chosen = prefix + [idx]
            taken = used | {idx}
            if res.kind is ResidualKind.EMPTY:
                return chosen + [i for i in range(k) if i not in taken]
            if len(taken) == k or taken in dead:
                continue
            found = search(res.body, chosen, taken)
            if found is not None:
                return found
            dead.add(taken)
        return None

    order = search(body, [], frozenset())
    if order is None:
        raise NoOrder("no peeling order keeps every partial residual convex")
    return order


def verify_certificate(cert: Certificate, body: ConvexBody, planks) -> Verification:
    """Re-derive every recorded quantity and re-check every inequality.

    Recorded values must coincide with their recomputation from the stored
    bodies; inequalities are checked at the certificate's tolerance.
    """
    planks = list(planks)
    bad = []
    bk = body.backend
    tol = bk.eps
    if cert.backend != bk.name:
        bad.append(f"backend: certificate says {cert.backend}, scene is {bk.name}")
    if cert.tolerance != tol:
        bad.append(f"tolerance: certificate says {cert.tolerance}, expected {tol}")
    try:
        order = _validate_order(cert.order, len(planks))
    except InvalidOrder as exc:
        return Verification(False, tuple(bad + [f"order: {exc}"]))
    dirs = sample_directions(body.dim, len(cert.sample_directions), cert.sample_seed, bk)
    if tuple(map(tuple, cert.sample_directions)) != dirs:
        bad.append("sample_directions: do not match the recorded seed")
    if not cert.steps:
        bad.append("steps: certificate has no steps")
    expected_before = body
    for m, step in enumerate(cert.steps):
        tag = f"step={m}"
        if m >= len(order) or step.plank_index != order[m]:
            bad.append(f"plank_index[{tag}]: does not follow the order")
            break
        if step.body_before != expected_before:
            bad.append(f"body_before[{tag}]: not the previous residual")
        try:
            fresh = _build_step(step.body_before, planks, order, m, dirs)
        except InvalidOrder as exc:
            bad.append(f"convexity[{tag}]: {exc}")
            break
        except CaseMismatch as exc:
            bad.append(f"dilation[{tag}]: {exc}")
            break
        except (PlankError, ValueError, ZeroDivisionError) as exc:
            bad.append(f"recompute[{tag}]: {exc}")
            break
        if fresh.empty != step.empty:
            bad.append(f"residual_kind[{tag}]: recorded empty={step.empty}, recomputed {fresh.empty}")
        if step.body_after != fresh.body_after:
            bad.append(f"residual_mismatch[{tag}]: body_after is not the residual of body_before")
        for name in ("rho", "ratio"):
            if getattr(step, name) != getattr(fresh, name):
                bad.append(f"{name}[{tag}]: recorded {getattr(step, name)}, recomputed {getattr(fresh, name)}")
        for name in ("widths_before", "widths_after"):
            rec, new = getattr(step, name), getattr(fresh, name)
            if set(rec) != set(new):
                bad.append(f"{name}[{tag}]: directions {sorted(rec)} != {sorted(new)}")
            for i in set(rec) & set(new):
                if rec[i] != new[i]:
                    bad.append(f"{name}[{tag},plank={i}]: recorded {rec[i]}, recomputed {new[i]}")
        for name in ("samples_before", "samples_after"):
            if tuple(getattr(step, name)) != tuple(getattr(fresh, name)):
                bad.append(f"{name}[{tag}]: sampled widths do not match recomputation")
        try:
            bad += _check_witness(step, fresh, planks[step.plank_index], dirs, tag, tol)
        except (PlankError, ValueError, ZeroDivisionError) as exc:
            bad.append(f"dilation[{tag}]: witness cannot be checked: {exc}")
        bad += step_diagnostics(step, m, tol, bk.eps)
        expected_before = step.body_after
        if step.empty and m != len(cert.steps) - 1:
            bad.append(f"steps[{tag}]: steps continue after the residual emptied")
    if cert.steps and not cert.steps[-1].empty:
        bad.append("steps: the last recorded residual is not empty")
    bound = chain_bound(cert.steps)
    if cert.chain_bound != bound:
        bad.append(f"chain_bound: recorded {cert.chain_bound}, recomputed {bound}")
    if bound < 1 - tol:
        bad.append(f"chain_bound: {bound} < 1")
    total = bang_sum(body, planks)
    if cert.bang_sum != total:
        bad.append(f"bang_sum: recorded {cert.bang_sum}, recomputed {total}")
    if total < bound - tol:
        bad.append(f"bang_sum: {total} below chain bound {bound}")
    if not cert.verified:
        bad.append("verified: certificate is marked unverified")
    return Verification(not bad, tuple(bad))


def _parallel(a, u, tol) -> bool:
    n = len(a)
    return all(abs(a[i] * u[j] - a[j] * u[i]) <= tol for i in range(n) for j in range(i + 1, n))


def _check_witness(step, fresh, plank, dirs, tag, tol):
    bad = []
    w, f = step.dilation, fresh.dilation
    if (w is None) != (f is None):
        bad.append(f"dilation[{tag}]: witness {'missing' if w is None else 'unexpected'} for this case")
        return bad
    if w is None:
        return bad
    if w != f:
        bad.append(f"dilation[{tag}]: recorded witness differs from recomputation")
    bk = step.body_before.backend
    u = bk.vector(plank.normal.unit)
    for name, h in (("h1", w.h1), ("h2", w.h2)):
        if not _parallel(h.normal, u, tol * bk.norm(h.normal)):
            bad.append(f"dilation_{name}[{tag}]: not parallel to the plank")
    a = w.h1.normal
    if abs(dot(a, w.p) - w.h1.offset) > tol * bk.norm(a):
        bad.append(f"dilation_p[{tag}]: p is not on H1")
    if not step.body_before.contains_point(w.p, tol):
        bad.append(f"dilation_p[{tag}]: p is not in the body")
    s2 = dot(u, w.h2.normal)
    h2_level = w.h2.offset if s2 > 0 else -w.h2.offset
    if not (bk.coerce(plank.lo) - tol <= h2_level <= bk.coerce(plank.hi) + tol):
        bad.append(f"dilation_h2[{tag}]: H2 is not inside the plank")
    s1 = dot(u, w.h1.normal)
    h1_level = w.h1.offset if s1 > 0 else -w.h1.offset
    if bk.coerce(plank.lo) - tol <= h1_level <= bk.coerce(plank.hi) + tol:
        bad.append(f"dilation_h1[{tag}]: H1 meets the plank")
    if w.rho != step.rho:
        bad.append(f"dilation_rho[{tag}]: witness rho differs from step rho")
    dilated = dilate_about(step.body_before, w.p, w.rho)
    margin = min(containment_slacks(step.body_after, dilated))
    if margin < -tol:
        bad.append(f"containment[{tag}]: dilated body leaves the residual by {-margin}")
    for d in dirs[:4]:
        if abs(width(dilated, d) - w.rho * width(step.body_before, d)) > tol:
            bad.append(f"dilation_scaling[{tag}]: width of dilated body is not rho times the original")
            break
    return bad
