"""Structure-preserving maps between monotone almost-distant classes.

Three families of rearrangements, all driven by rank capability inside
occurrences of 12...k:

* ``map_F`` / ``invert_F``: move every rank-(i+1)-capable entry directly in
  front of its landing entry (the rightmost larger rank-(i+2) entry outside
  the moving set), ties placed in increasing order. A bijection from
  Av(M(k,i+1,i+1)) onto Av(M(k,i+2,i+2)).
* ``map_G`` and its inverse: reverse, for every entry that can act as a 2 but
  not a 1, the contiguous window of possible 1-partners in front of it. A
  bijection between Av(M(k,2,2)) and Av(M(k,2,1)).
* ``map_H``: the rank-j analogue of G's inverse, an injection from
  Av(M(k,j,j-1)) into Av(M(k,j,j)). The mirrored shortcut in the other
  direction fails (see ``naive_reverse_H``), which is exactly why the image
  of H is a proper avoidance class of its own.

Edge steps use virtual anchors: for i = 0 the moving entries return to the
very front, for i = k-1 they land at the very end. Anchors are never
permutation values.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .enumeration import avoids_basis
from .errors import DomainError, InternalCheckError, NotInImageError, UsageError
from .patterns import PatternBasis, monotone_basis
from .perms import Perm, format_perm, lis_tables, reverse_complement

__all__ = [
    "RoleSets",
    "MapResult",
    "role_sets",
    "map_F",
    "invert_F",
    "map_G",
    "map_H",
    "map_H_conjugate",
    "naive_reverse_H",
    "apply_named_map",
]


@dataclass(frozen=True)
class RoleSets:
    """The (A, B, C) index triple plus the landing map f for one F step.

    ``a_positions`` is None when i = 0 (start anchor) and ``c_positions`` is
    None when i = k-1 (end anchor). ``f_map`` pairs each B position with its
    landing C position, or None for the end anchor. Positions are 0-based.
    """

    perm: Perm
    k: int
    i: int
    b_positions: tuple[int, ...]
    a_positions: tuple[int, ...] | None
    c_positions: tuple[int, ...] | None
    f_map: tuple[tuple[int, int | None], ...]

    def a_values(self) -> tuple[int, ...] | None:
        if self.a_positions is None:
            return None
        return tuple(sorted(self.perm[t] for t in self.a_positions))

    def b_values(self) -> tuple[int, ...]:
        return tuple(sorted(self.perm[t] for t in self.b_positions))

    def c_values(self) -> tuple[int, ...] | None:
        if self.c_positions is None:
            return None
        return tuple(sorted(self.perm[t] for t in self.c_positions))

    def f_by_value(self) -> dict[int, int | str]:
        return {
            self.perm[b]: ("end" if c is None else self.perm[c]) for b, c in self.f_map
        }

    def as_json_dict(self) -> dict:
        def side(positions):
            if positions is None:
                return None
            return {
                "positions": [t + 1 for t in positions],
                "values": [self.perm[t] for t in positions],
            }

        return {
            "k": self.k,
            "i": self.i,
            "A": side(self.a_positions) or "start-anchor",
            "B": side(self.b_positions),
            "C": side(self.c_positions) or "end-anchor",
            "f": [
                {"from_value": self.perm[b], "to_value": "end" if c is None else self.perm[c]}
                for b, c in self.f_map
            ],
        }


@dataclass(frozen=True)
class MapResult:
    map_name: str
    k: int
    input: Perm
    output: Perm
    params: tuple[tuple[str, int | str], ...] = ()
    roles: RoleSets | None = None
    windows: tuple[tuple[int, int], ...] | None = None
    pre_checked: bool | None = None
    post_checked: bool | None = None

    def as_json_dict(self) -> dict:
        return {
            "map": self.map_name,
            "k": self.k,
            **{name: value for name, value in self.params},
            "input": format_perm(self.input),
            "output": format_perm(self.output),
            "windows_or_roles": self._windows_or_roles(),
            "class_checks": {"pre": self.pre_checked, "post": self.post_checked},
        }

    def _windows_or_roles(self):
        if self.windows is not None:
            return {
                "windows": [
                    {"start": s + 1, "end": e, "values": list(self.input[s:e])}
                    for s, e in self.windows
                ]
            }
        if self.roles is not None:
            return self.roles.as_json_dict()
        return None


def _require_class(p: Perm, basis: PatternBasis, what: str) -> None:
    if not avoids_basis(p, basis):
        raise DomainError(f"{format_perm(p) or 'empty'} is not in Av({basis.label}); {what}")


def role_sets(p: Perm, k: int, i: int, validate: bool = True) -> RoleSets:
    """Compute B (rank-(i+1)-capable), A (rank-i-capable outside B, or the
    start anchor for i = 0), C (rank-(i+2)-capable outside B, or the end
    anchor for i = k-1), and the landing map f."""
    if k < 1:
        raise UsageError(f"k must be >= 1, got {k}")
    if not 0 <= i <= k - 1:
        raise UsageError(f"step index i must be in 0..{k - 1}, got {i}")
    if validate:
        _require_class(p, monotone_basis(k, i + 1, i + 1), "required by this step")
    up, down = lis_tables(p)
    n = len(p)
    b = tuple(t for t in range(n) if up[t] >= i + 1 and down[t] >= k - i)
    bset = set(b)
    a = None
    if i > 0:
        a = tuple(
            t for t in range(n) if t not in bset and up[t] >= i and down[t] >= k - i + 1
        )
    c = None
    if i < k - 1:
        c = tuple(
            t
            for t in range(n)
            if t not in bset and up[t] >= i + 2 and down[t] >= k - i - 1
        )
    f: list[tuple[int, int | None]] = []
    for t in b:
        if c is None:
            f.append((t, None))
            continue
        landing = None
        for cpos in c:
            if p[cpos] > p[t]:
                landing = cpos
        if landing is None:
            raise InternalCheckError(
                f"no landing entry above value {p[t]} in {format_perm(p)} "
                f"(k={k}, i={i}); input violates the step's guarantees"
            )
        f.append((t, landing))
    return RoleSets(
        perm=p, k=k, i=i, b_positions=b, a_positions=a, c_positions=c, f_map=tuple(f)
    )


def map_F(p: Perm, k: int, i: int, validate: bool = True) -> MapResult:
    """Move every B entry directly before its landing entry (end anchor for
    i = k-1), ties in increasing order; everything else keeps its order."""
    roles = role_sets(p, k, i, validate)
    bset = set(roles.b_positions)
    pending: dict[int, list[int]] = defaultdict(list)
    at_end: list[int] = []
    for b, c in roles.f_map:
        if c is None:
            at_end.append(p[b])
        else:
            pending[c].append(p[b])
    out: list[int] = []
    for t in range(len(p)):
        if t in bset:
            continue
        if t in pending:
            out.extend(sorted(pending[t]))
        out.append(p[t])
    out.extend(sorted(at_end))
    output = tuple(out)
    post = avoids_basis(output, monotone_basis(k, i + 2, i + 2)) if validate else None
    return MapResult(
        map_name="F",
        k=k,
        input=p,
        output=output,
        params=(("i", i),),
        roles=roles,
        pre_checked=True if validate else None,
        post_checked=post,
    )


def invert_F(w: Perm, k: int, i: int, validate: bool = True) -> MapResult:
    """Send every rank-(i+1)-capable entry of ``w`` back directly after its
    partner A entry (to the very front for i = 0), ties in increasing order.

    The partner is the leftmost A entry left of the moving entry with smaller
    value; when several qualify, only the leftmost can be the original
    neighbor, since any candidate further left would have qualified in the
    preimage as well and collide with the uniqueness of joint (i, i+1) roles
    there. With ``validate`` the reconstruction is confirmed by re-applying
    the forward map.
    """
    if k < 1:
        raise UsageError(f"k must be >= 1, got {k}")
    if not 0 <= i <= k - 1:
        raise UsageError(f"step index i must be in 0..{k - 1}, got {i}")
    if validate:
        _require_class(w, monotone_basis(k, i + 2, i + 2), "required by this step")
    up, down = lis_tables(w)
    n = len(w)
    b = [t for t in range(n) if up[t] >= i + 1 and down[t] >= k - i]
    bset = set(b)
    out: list[int] = []
    if i == 0:
        out.extend(sorted(w[t] for t in b))
        out.extend(w[t] for t in range(n) if t not in bset)
    else:
        a = [t for t in range(n) if t not in bset and up[t] >= i and down[t] >= k - i + 1]
        attach: dict[int, list[int]] = defaultdict(list)
        for t in b:
            partner = None
            for cand in a:
                if cand >= t:
                    break
                if w[cand] < w[t]:
                    partner = cand
                    break
            if partner is None:
                raise NotInImageError(
                    f"{format_perm(w)} is not in the image of the step "
                    f"(k={k}, i={i}): value {w[t]} has no partner entry"
                )
            attach[partner].append(w[t])
        for t in range(n):
            if t in bset:
                continue
            out.append(w[t])
            if t in attach:
                out.extend(sorted(attach[t]))
    output = tuple(out)
    if validate:
        redo = map_F(output, k, i, validate=False)
        if redo.output != w:
            raise NotInImageError(
                f"{format_perm(w)} is not in the image of the step (k={k}, i={i}): "
                "reconstruction does not map back"
            )
    post = avoids_basis(output, monotone_basis(k, i + 1, i + 1)) if validate else None
    return MapResult(
        map_name="Finv",
        k=k,
        input=w,
        output=output,
        params=(("i", i),),
        pre_checked=True if validate else None,
        post_checked=post,
    )


def _reversal_windows(
    p: Perm, k: int, rank: int, exclude_lower: bool
) -> tuple[tuple[int, int], ...]:
    """Windows [h(a), a) of positions to reverse, one per anchor entry.

    Anchors are the rank-capable entries (minus the (rank-1)-capable ones
    when ``exclude_lower``); h(a) is the leftmost smaller entry that can act
    as rank-1 toward the anchor. Windows must come out pairwise disjoint on
    class members; overlap means the input was outside the class.
    """
    up, down = lis_tables(p)
    n = len(p)
    need_down = k - rank + 1
    anchors = [t for t in range(n) if up[t] >= rank and down[t] >= need_down]
    if exclude_lower:
        anchors = [
            t for t in anchors if not (up[t] >= rank - 1 and down[t] >= need_down + 1)
        ]
    windows: list[tuple[int, int]] = []
    for a in anchors:
        pa = p[a]
        h = None
        for t in range(a):
            if p[t] < pa and up[t] >= rank - 1:
                h = t
                break
        if h is None:
            raise InternalCheckError(
                f"anchor value {pa} in {format_perm(p)} has no window start "
                f"(k={k}, rank={rank}); input violates the map's guarantees"
            )
        windows.append((h, a))
    windows.sort()
    for (s1, e1), (s2, _) in zip(windows, windows[1:]):
        if e1 > s2:
            raise InternalCheckError(
                f"overlapping reversal windows in {format_perm(p)} "
                f"(k={k}, rank={rank}); input violates the map's guarantees"
            )
    return tuple(windows)


def _reverse_windows(p: Perm, windows: tuple[tuple[int, int], ...]) -> Perm:
    out = list(p)
    for s, e in windows:
        out[s:e] = reversed(out[s:e])
    return tuple(out)


def map_G(p: Perm, k: int, direction: str = "to_21", validate: bool = True) -> MapResult:
    """Reverse each anchor's window of possible 1-partners.

    ``to_21`` maps Av(M(k,2,2)) onto Av(M(k,2,1)); ``to_22`` is the inverse
    direction. Both directions run the identical construction; only the
    precondition differs (windows are increasing on one side, decreasing on
    the other).
    """
    if k < 2:
        raise UsageError(f"k must be >= 2 for this map, got {k}")
    if direction not in ("to_21", "to_22"):
        raise UsageError(f"direction must be to_21 or to_22, got {direction!r}")
    src_i = 2 if direction == "to_21" else 1
    tgt_i = 1 if direction == "to_21" else 2
    if validate:
        _require_class(p, monotone_basis(k, 2, src_i), "required by this map")
    windows = _reversal_windows(p, k, rank=2, exclude_lower=True)
    output = _reverse_windows(p, windows)
    post = avoids_basis(output, monotone_basis(k, 2, tgt_i)) if validate else None
    return MapResult(
        map_name="G" if direction == "to_21" else "Ginv",
        k=k,
        input=p,
        output=output,
        params=(("direction", direction),),
        windows=windows,
        pre_checked=True if validate else None,
        post_checked=post,
    )


def map_H(p: Perm, k: int, j: int, validate: bool = True) -> MapResult:
    """Reverse each rank-j anchor's window of possible (j-1)-partners:
    an injection from Av(M(k,j,j-1)) into Av(M(k,j,j))."""
    if not 2 <= j <= k:
        raise UsageError(f"j must be in 2..k for this map, got j={j}, k={k}")
    if validate:
        _require_class(p, monotone_basis(k, j, j - 1), "required by this map")
    windows = _reversal_windows(p, k, rank=j, exclude_lower=False)
    output = _reverse_windows(p, windows)
    post = avoids_basis(output, monotone_basis(k, j, j)) if validate else None
    return MapResult(
        map_name="H",
        k=k,
        input=p,
        output=output,
        params=(("j", j),),
        windows=windows,
        pre_checked=True if validate else None,
        post_checked=post,
    )


def map_H_conjugate(p: Perm, k: int, j: int, validate: bool = True) -> MapResult:
    """The i = j+1 companion of ``map_H``: an injection from Av(M(k,j,j+1))
    into Av(M(k,j,j)), realized by conjugating H with reverse-complement."""
    if not 2 <= j <= k:
        raise UsageError(f"j must be in 2..k for this map, got j={j}, k={k}")
    if validate:
        _require_class(p, monotone_basis(k, j, j + 1), "required by this map")
    inner = map_H(reverse_complement(p), k, k + 2 - j, validate=False)
    output = reverse_complement(inner.output)
    post = avoids_basis(output, monotone_basis(k, j, j)) if validate else None
    return MapResult(
        map_name="Hrc",
        k=k,
        input=p,
        output=output,
        params=(("j", j),),
        pre_checked=True if validate else None,
        post_checked=post,
    )


def naive_reverse_H(p: Perm, k: int, j: int, validate: bool = True) -> MapResult:
    """The would-be inverse of ``map_H``, mirroring its construction on
    Av(M(k,j,j)). It does not always land in Av(M(k,j,j-1)) for j > 2;
    kept as a diagnostic (312456 with k=4, j=3 is the classic escape)."""
    if not 2 <= j <= k:
        raise UsageError(f"j must be in 2..k for this map, got j={j}, k={k}")
    if validate:
        _require_class(p, monotone_basis(k, j, j), "required by this map")
    windows = _reversal_windows(p, k, rank=j, exclude_lower=True)
    output = _reverse_windows(p, windows)
    post = avoids_basis(output, monotone_basis(k, j, j - 1)) if validate else None
    return MapResult(
        map_name="HnaiveInv",
        k=k,
        input=p,
        output=output,
        params=(("j", j),),
        windows=windows,
        pre_checked=True if validate else None,
        post_checked=post,
    )


def apply_named_map(
    name: str,
    p: Perm,
    k: int,
    *,
    i: int | None = None,
    j: int | None = None,
    validate: bool = True,
) -> MapResult:
    """Dispatch for the CLI-facing map names F, Finv, G, Ginv, H."""
    if name == "F":
        if i is None:
            raise UsageError("map F needs --i")
        return map_F(p, k, i, validate)
    if name == "Finv":
        if i is None:
            raise UsageError("map Finv needs --i")
        return invert_F(p, k, i, validate)
    if name == "G":
        return map_G(p, k, "to_21", validate)
    if name == "Ginv":
        return map_G(p, k, "to_22", validate)
    if name == "H":
        if j is None:
            raise UsageError("map H needs --j")
        return map_H(p, k, j, validate)
    raise UsageError(f"unknown map {name!r} (expected F, Finv, G, Ginv, or H)")
