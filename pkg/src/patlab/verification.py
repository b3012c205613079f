"""Exact verification machinery: Wilf-equivalence checks, map certification
over fully enumerated classes, explicit and empirical forbidden-pattern
bases for the image of H, growth diagnostics, and the almost-distant survey.

Everything here is exact integer computation over finite ranges. Growth
numbers are finite-n diagnostics only: limits are out of reach at desk scale
and no verdict is ever attached to them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Context, Decimal, localcontext
from fractions import Fraction
from itertools import permutations as iter_perms

from .enumeration import (
    CountSequence,
    avoids_basis,
    count_sequence,
    enumerate_avoiders,
    levels_avoiders,
)
from .errors import UsageError, VerificationFailure
from .maps import invert_F, map_F, map_G, map_H
from .patterns import (
    PatternBasis,
    basis_union,
    distant_monotone_basis,
    make_basis,
    monotone_basis,
)
from .perms import Perm, deletions, direct_sum, format_perm, identity

__all__ = [
    "WilfReport",
    "CertifyReport",
    "BasisResult",
    "GrowthDiagnostics",
    "SandwichReport",
    "SurveyReport",
    "verify_wilf",
    "certify_map",
    "construct_S_explicit",
    "discover_basis",
    "growth_diagnostics",
    "distant_growth_bounds",
    "reference_growth_rate",
    "sandwich_check",
    "survey_almost_distant",
]


# -- Wilf equivalence -------------------------------------------------------


@dataclass(frozen=True)
class WilfReport:
    left: CountSequence
    right: CountSequence
    max_n: int
    equal: bool
    diverges_at: int | None

    def as_json_dict(self) -> dict:
        doc = {
            "verdict": "equal" if self.equal else "diverges_at",
            "max_n": self.max_n,
            "counts": {
                "left": {"class": self.left.basis_label, "values": list(self.left.counts)},
                "right": {"class": self.right.basis_label, "values": list(self.right.counts)},
            },
        }
        if not self.equal:
            n = self.diverges_at
            doc["witnesses"] = [
                {"n": n, "left": self.left.count(n), "right": self.right.count(n)}
            ]
        return doc


def verify_wilf(
    left: PatternBasis,
    right: PatternBasis,
    max_n: int,
    *,
    parallel: bool = False,
    node_budget: int | None = None,
) -> WilfReport:
    """Compare the two avoidance count sequences exactly for n <= max_n."""
    lc = count_sequence(max_n, left, parallel=parallel, node_budget=node_budget)
    rc = count_sequence(max_n, right, parallel=parallel, node_budget=node_budget)
    diverges = None
    for (n, a), (_, b) in zip(lc.counts, rc.counts):
        if a != b:
            diverges = n
            break
    return WilfReport(lc, rc, max_n, diverges is None, diverges)


# -- map certification ------------------------------------------------------


@dataclass(frozen=True)
class CertifyReport:
    """Per-length evidence that a map is what it claims to be on a class.

    F and G are expected to certify as bijections with exact roundtrips; H
    certifies as an injection and its per-length surjectivity deficits are
    reported, not judged.
    """

    map_name: str
    k: int
    params: tuple[tuple[str, int | str], ...]
    max_n: int
    expectation: str  # "bijection" | "injection"
    rows: tuple[dict, ...]
    certified: bool
    counterexample: dict | None
    findings: tuple[str, ...] = ()

    def as_json_dict(self) -> dict:
        return {
            "verdict": "certified" if self.certified else "failed",
            "map": self.map_name,
            "k": self.k,
            **{name: value for name, value in self.params},
            "expectation": self.expectation,
            "max_n": self.max_n,
            "rows": list(self.rows),
            "witnesses": [] if self.counterexample is None else [self.counterexample],
            "findings": list(self.findings),
        }


def certify_map(
    map_name: str,
    k: int,
    *,
    i: int | None = None,
    j: int | None = None,
    max_n: int,
    node_budget: int | None = None,
) -> CertifyReport:
    """Enumerate the source class for every n <= max_n, push it through the
    map, and check image membership, injectivity, surjectivity
    (by count), and the roundtrip where an inverse exists."""
    if map_name == "F":
        if i is None or not 0 <= i <= k - 1:
            raise UsageError(f"map F needs a step index i in 0..{k - 1}")
        source = monotone_basis(k, i + 1, i + 1)
        target = monotone_basis(k, i + 2, i + 2)
        params: tuple = (("i", i),)
        expectation = "bijection"
        forward = lambda p: map_F(p, k, i, validate=False)
        backward = lambda w: invert_F(w, k, i, validate=False)
    elif map_name == "G":
        source = monotone_basis(k, 2, 2)
        target = monotone_basis(k, 2, 1)
        params = (("direction", "to_21"),)
        expectation = "bijection"
        forward = lambda p: map_G(p, k, "to_21", validate=False)
        backward = lambda w: map_G(w, k, "to_22", validate=False)
    elif map_name == "H":
        if j is None or not 2 <= j <= k:
            raise UsageError(f"map H needs j in 2..{k}")
        source = monotone_basis(k, j, j - 1)
        target = monotone_basis(k, j, j)
        params = (("j", j),)
        expectation = "injection"
        forward = lambda p: map_H(p, k, j, validate=False)
        backward = None
    else:
        raise UsageError(f"cannot certify map {map_name!r} (expected F, G, or H)")

    src_levels = levels_avoiders(source, max_n, node_budget=node_budget)
    tgt_counts = count_sequence(max_n, target, node_budget=node_budget)
    rows: list[dict] = []
    counterexample: dict | None = None
    findings: list[str] = []
    certified = True
    for n in range(max_n + 1):
        members = sorted(src_levels[n])
        images = []
        image_ok = True
        roundtrip_ok = None if backward is None else True
        for p in members:
            res = forward(p)
            w = res.output
            images.append(w)
            if image_ok and not avoids_basis(w, target):
                image_ok = False
                counterexample = counterexample or {
                    "n": n,
                    "reason": "image leaves the target class",
                    "input": format_perm(p),
                    "output": format_perm(w),
                }
            if res.roles is not None:
                for b, c in res.roles.f_map:
                    if c is not None and c < b:
                        findings.append(
                            f"landing entry left of mover: value {p[b]} in {format_perm(p)}"
                        )
            if backward is not None:
                back = backward(w).output
                if back != p:
                    roundtrip_ok = False
                    counterexample = counterexample or {
                        "n": n,
                        "reason": "roundtrip failed",
                        "input": format_perm(p),
                        "output": format_perm(w),
                        "recovered": format_perm(back),
                    }
        distinct = len(set(images))
        injective = distinct == len(images)
        if not injective and counterexample is None:
            counterexample = {"n": n, "reason": "two inputs share an output"}
        surjective = distinct == tgt_counts.count(n)
        rows.append(
            {
                "n": n,
                "source_size": len(members),
                "target_size": tgt_counts.count(n),
                "image_size": distinct,
                "image_in_target": image_ok,
                "injective": injective,
                "surjective": surjective,
                "roundtrip_ok": roundtrip_ok,
            }
        )
        ok = image_ok and injective and (roundtrip_ok in (True, None))
        if expectation == "bijection":
            ok = ok and surjective
        certified = certified and ok
    return CertifyReport(
        map_name=map_name,
        k=k,
        params=params,
        max_n=max_n,
        expectation=expectation,
        rows=tuple(rows),
        certified=certified,
        counterexample=counterexample,
        findings=tuple(findings),
    )


# -- the finite extra-pattern set S for the image of H ----------------------


def construct_S_explicit(k: int, j: int) -> PatternBasis:
    """The known closed forms of the forbidden set S with Av(M(k,j,j-1)) =
    Av(S): plain M(k,2,2) for j = 2, one extra pattern for j = 3, three
    direct-sum extras for j = 4. Other j have no closed form here; use
    ``discover_basis``."""
    if j == 2:
        if k < 2:
            raise UsageError("j=2 needs k >= 2")
        return monotone_basis(k, 2, 2)
    if j == 3:
        if k < 2:
            raise UsageError("j=3 needs k >= 2")
        extra = (3, 1, 2) + tuple(range(4, k + 3))
        return basis_union(
            [monotone_basis(k, 3, 3), make_basis([extra])],
            label=f"M({k},3,3);{format_perm(extra)}",
        )
    if j == 4:
        if k < 3:
            raise UsageError("j=4 needs k >= 3")
        tail = identity(k - 2)
        extras = [
            direct_sum((1, 4, 2, 3), tail),
            direct_sum((4, 5, 1, 2, 3), tail),
            direct_sum((3, 5, 1, 2, 4), tail),
        ]
        label = ";".join([f"M({k},4,4)"] + [format_perm(q) for q in extras])
        return basis_union([monotone_basis(k, 4, 4), make_basis(extras)], label=label)
    raise UsageError(
        f"no explicit basis is known for j={j}; discover it empirically with discover_basis"
    )


@dataclass(frozen=True)
class BasisResult:
    """Empirical forbidden-pattern basis of the image of H up to max_len."""

    k: int
    j: int
    max_len: int
    discovered: PatternBasis
    predicted: PatternBasis | None
    matches_predicted: bool | None
    image_sizes: tuple[tuple[int, int], ...]

    def as_json_dict(self) -> dict:
        if self.matches_predicted is None:
            verdict = "discovered"
        elif self.matches_predicted:
            verdict = "matches-predicted"
        else:
            verdict = "prediction-mismatch"
        return {
            "verdict": verdict,
            "k": self.k,
            "j": self.j,
            "max_len": self.max_len,
            "discovered": [format_perm(q) for q in self.discovered],
            "predicted": None
            if self.predicted is None
            else [format_perm(q) for q in self.predicted],
            "image_sizes": [list(pair) for pair in self.image_sizes],
        }


def discover_basis(k: int, j: int, max_len: int, *, node_budget: int | None = None) -> BasisResult:
    """Compute the image of H length by length, confirm it is deletion
    closed, and collect its minimal non-members: permutations outside the
    image whose every single-entry deletion lies inside.

    A deletion-closure violation is a hard finding (it would contradict the
    image being an avoidance class) and raises VerificationFailure.
    """
    if not 2 <= j <= k:
        raise UsageError(f"j must be in 2..k, got j={j}, k={k}")
    if max_len > 9:
        raise UsageError(f"max_len is capped at 9, got {max_len}")
    source = monotone_basis(k, j, j - 1)
    src_levels = levels_avoiders(source, max_len, node_budget=node_budget)
    image: dict[int, frozenset[Perm]] = {}
    minimal: list[Perm] = []
    for n in range(max_len + 1):
        image[n] = frozenset(map_H(p, k, j, validate=False).output for p in src_levels[n])
        if n > 0:
            for w in image[n]:
                for d in deletions(w):
                    if d not in image[n - 1]:
                        raise VerificationFailure(
                            f"image of H (k={k}, j={j}) is not deletion closed at "
                            f"n={n}: {format_perm(w)} drops to the non-member "
                            f"{format_perm(d)}",
                            witness=w,
                        )
        for q in iter_perms(range(1, n + 1)):
            if q in image[n]:
                continue
            if all(d in image[n - 1] for d in deletions(q)):
                minimal.append(q)
    discovered = make_basis(minimal, label=f"discovered(k={k},j={j},len<={max_len})", minimal=True)
    predicted = None
    matches = None
    if j in (2, 3, 4) and (k >= 3 or j != 4):
        predicted = construct_S_explicit(k, j)
        trimmed = make_basis(
            [q for q in predicted if len(q) <= max_len], label=predicted.label
        )
        matches = trimmed.as_set() == discovered.as_set()
    return BasisResult(
        k=k,
        j=j,
        max_len=max_len,
        discovered=discovered,
        predicted=predicted,
        matches_predicted=matches,
        image_sizes=tuple((n, len(image[n])) for n in range(max_len + 1)),
    )


# -- growth diagnostics -----------------------------------------------------


def distant_growth_bounds(k: int) -> tuple[float, float]:
    """Reference interval for the growth rate of any monotone distant class
    D(k,j) with an interior gap: [(k-1)^2, (k-1)^2 + 1]."""
    return (float((k - 1) ** 2), float((k - 1) ** 2 + 1))


def reference_growth_rate(k: int, j: int, i: int) -> float | None:
    """Known exact growth rates for monotone almost-distant classes."""
    if j == k + 1 and 2 <= i <= k:
        return float((k - 1) ** 2)
    if j == k + 1 and i == k + 1:
        return float((k - 1) ** 2 + 1)
    if (k, j, i) == (3, 3, 1):
        golden = (1 + math.sqrt(5)) / 2
        return (1 + math.sqrt(golden)) ** 2
    return None


@dataclass(frozen=True)
class GrowthDiagnostics:
    """Finite-n growth data: successive ratios and n-th roots of the counts.

    Ratios are exact rationals; roots carry 12 significant digits and are
    reproducible bit for bit from the counts. No convergence claim is made.
    """

    basis_label: str
    counts: CountSequence
    ratios: tuple[tuple[int, Fraction], ...]
    roots: tuple[tuple[int, str], ...]
    reference_bounds: tuple[float, float] | None

    def as_json_dict(self) -> dict:
        return {
            "class": self.basis_label,
            "note": "finite-n diagnostics",
            "counts": [list(pair) for pair in self.counts.counts],
            "ratios": [
                {"n": n, "ratio": f"{r.numerator}/{r.denominator}"} for n, r in self.ratios
            ],
            "roots": [{"n": n, "root": s} for n, s in self.roots],
            "reference_bounds": list(self.reference_bounds)
            if self.reference_bounds
            else None,
        }


def _nth_root_str(count: int, n: int) -> str:
    # Decimal keeps this reproducible across platforms; 12 significant digits.
    with localcontext() as ctx:
        ctx.prec = 30
        root = (Decimal(count).ln() / n).exp()
    return str(root.normalize(Context(prec=12)))


def growth_diagnostics(
    basis: PatternBasis,
    max_n: int,
    bounds: tuple[float, float] | None = None,
    *,
    parallel: bool = False,
    node_budget: int | None = None,
) -> GrowthDiagnostics:
    seq = count_sequence(max_n, basis, parallel=parallel, node_budget=node_budget)
    ratios = []
    roots = []
    prev = None
    for n, c in seq.counts:
        if prev is not None and prev > 0:
            ratios.append((n, Fraction(c, prev)))
        if n >= 1 and c > 0:
            roots.append((n, _nth_root_str(c, n)))
        prev = c
    return GrowthDiagnostics(
        basis_label=basis.label,
        counts=seq,
        ratios=tuple(ratios),
        roots=tuple(roots),
        reference_bounds=bounds,
    )


# -- the count sandwich around monotone distant classes ----------------------


@dataclass(frozen=True)
class SandwichReport:
    k: int
    j: int
    max_n: int
    rows: tuple[dict, ...]
    inclusions_checked_to: int

    def as_json_dict(self) -> dict:
        return {
            "verdict": "holds",
            "k": self.k,
            "j": self.j,
            "max_n": self.max_n,
            "rows": list(self.rows),
            "inclusions_checked_to": self.inclusions_checked_to,
            "witnesses": [],
        }


def sandwich_check(
    k: int, j: int, max_n: int, *, node_budget: int | None = None
) -> SandwichReport:
    """Verify |Av_n(12...k)| <= |Av_n(D(k,j))| <= |Av_n(M(k,j,j))| exactly for
    n <= max_n, and the set inclusions themselves for n <= min(max_n, 8).
    Raises VerificationFailure with a witness on any violation."""
    if not 2 <= j <= k:
        raise UsageError(f"j must be in 2..k, got j={j}, k={k}")
    lower = make_basis([identity(k)], label=format_perm(identity(k)))
    mid = distant_monotone_basis(k, j)
    upper = monotone_basis(k, j, j)
    lo_seq = count_sequence(max_n, lower, node_budget=node_budget)
    mid_seq = count_sequence(max_n, mid, node_budget=node_budget)
    up_seq = count_sequence(max_n, upper, node_budget=node_budget)
    rows = []
    for n in range(max_n + 1):
        a, b, c = lo_seq.count(n), mid_seq.count(n), up_seq.count(n)
        if not a <= b <= c:
            raise VerificationFailure(
                f"count sandwich fails at n={n} for k={k}, j={j}: {a}, {b}, {c}",
                witness=n,
            )
        rows.append({"n": n, "lower": a, "mid": b, "upper": c})
    incl_to = min(max_n, 8)
    lo_levels = levels_avoiders(lower, incl_to, node_budget=node_budget)
    mid_levels = levels_avoiders(mid, incl_to, node_budget=node_budget)
    up_levels = levels_avoiders(upper, incl_to, node_budget=node_budget)
    for n in range(incl_to + 1):
        bad = lo_levels[n] - mid_levels[n]
        if bad:
            raise VerificationFailure(
                f"set inclusion fails at n={n} for k={k}, j={j}: "
                f"{format_perm(min(bad))} avoids 12...k but not D({k},{j})",
                witness=min(bad),
            )
        bad = mid_levels[n] - up_levels[n]
        if bad:
            raise VerificationFailure(
                f"set inclusion fails at n={n} for k={k}, j={j}: "
                f"{format_perm(min(bad))} avoids D({k},{j}) but not M({k},{j},{j})",
                witness=min(bad),
            )
    return SandwichReport(k=k, j=j, max_n=max_n, rows=tuple(rows), inclusions_checked_to=incl_to)


# -- almost-distant survey (experiment) --------------------------------------


@dataclass(frozen=True)
class SurveyReport:
    """Empirical Wilf classes of all almost-distant variants of one pattern."""

    underlying: Perm
    max_n: int
    groups: tuple[tuple[tuple[int, ...], tuple[tuple[int, int], ...]], ...]

    def as_json_dict(self) -> dict:
        return {
            "verdict": "experiment",
            "underlying": format_perm(self.underlying),
            "max_n": self.max_n,
            "groups": [
                {"counts": list(counts), "specs": [list(s) for s in specs]}
                for counts, specs in self.groups
            ],
        }


def survey_almost_distant(
    q_prime: Perm,
    max_n: int,
    *,
    parallel: bool = False,
    node_budget: int | None = None,
) -> SurveyReport:
    """Count Av_n for every (box position, removed value) variant of
    ``q_prime`` and group variants with identical sequences."""
    from .patterns import AlmostDistantPattern, expand_almost_distant

    k = len(q_prime)
    if k < 1:
        raise UsageError("survey needs a nonempty underlying pattern")
    by_counts: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for j in range(1, k + 2):
        for i in range(1, k + 2):
            basis = expand_almost_distant(AlmostDistantPattern(q_prime, j, i))
            seq = count_sequence(max_n, basis, parallel=parallel, node_budget=node_budget)
            by_counts.setdefault(seq.values(), []).append((j, i))
    groups = sorted(
        ((counts, tuple(sorted(specs))) for counts, specs in by_counts.items()),
        key=lambda item: item[1],
    )
    return SurveyReport(underlying=q_prime, max_n=max_n, groups=tuple(groups))
