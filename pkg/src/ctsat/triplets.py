"""Compact triplets structures (CTS): construction, clearing, enumeration, unification.

Triplets and tiers are kept as small ints: bit 2 is the value at the tier's
first position, bit 0 the value at its third.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .decomposition import CtFormula, Permutation, bits_value, make_permutation, triplet_bits

ALL_TRIPLETS = frozenset(range(8))


class EnumerationOverflow(RuntimeError):
    """The coded set is larger than the caller's cap."""


def tbit(t: int, offset: int) -> int:
    """Value at position ``offset`` (0..2) of triplet ``t``."""
    return (t >> (2 - offset)) & 1


# _PAIR[a][b][t] = (value at offset a, value at offset b) of triplet t
_PAIR = [[[(tbit(t, a), tbit(t, b)) for t in range(8)] for b in range(3)] for a in range(3)]


@dataclass(frozen=True)
class Cts:
    permutation: Permutation
    tiers: tuple[frozenset, ...]

    def __post_init__(self):
        n = len(self.permutation)
        if n < 3:
            raise ValueError("a triplets structure needs n >= 3")
        make_permutation(self.permutation, n)
        if len(self.tiers) != n - 2:
            raise ValueError(f"expected {n - 2} tiers, got {len(self.tiers)}")
        object.__setattr__(self, "tiers", tuple(frozenset(t) for t in self.tiers))

    @property
    def n(self) -> int:
        return len(self.permutation)

    @property
    def empty(self) -> bool:
        return any(not t for t in self.tiers)

    @classmethod
    def from_bits(cls, permutation: Sequence[int], tiers: Sequence[Sequence[str]]) -> "Cts":
        return cls(tuple(permutation), tuple(frozenset(bits_value(b) for b in t) for t in tiers))

    @classmethod
    def complete(cls, permutation: Sequence[int]) -> "Cts":
        return cls(tuple(permutation), (ALL_TRIPLETS,) * (len(permutation) - 2))

    def tier_bits(self) -> list[list[str]]:
        return [sorted(triplet_bits(t) for t in tier) for tier in self.tiers]

    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.permutation)}

    def to_json(self) -> dict:
        return {
            "permutation": [v + 1 for v in self.permutation],
            "tiers": self.tier_bits(),
            "empty": self.empty,
        }

    def __le__(self, other: "Cts") -> bool:
        """Substructure relation: tier-wise inclusion over the same permutation."""
        return (self.permutation == other.permutation
                and all(a <= b for a, b in zip(self.tiers, other.tiers)))


@dataclass(frozen=True)
class CtsSystem:
    structures: tuple[Cts, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "structures", tuple(self.structures))
        for s in self.structures:
            if s.n != self.n:
                raise ValueError("all structures must act on the same n variables")

    @property
    def empty(self) -> bool:
        return any(s.empty for s in self.structures)

    def __len__(self):
        return len(self.structures)

    def __iter__(self):
        return iter(self.structures)

    def to_json(self) -> dict:
        return {"n": self.n, "structures": [s.to_json() for s in self.structures]}


def _compatible(tiers: list[set], j: int, t: int) -> bool:
    if j > 0 and not any((y & 3) == (t >> 1) for y in tiers[j - 1]):
        return False
    if j < len(tiers) - 1 and not any((y >> 1) == (t & 3) for y in tiers[j + 1]):
        return False
    return True


def _supported(tiers: list[set], j: int) -> set:
    """Lines of tier j that adjoin some line on each neighbouring tier."""
    tier = tiers[j]
    if j > 0:
        tails = {y & 3 for y in tiers[j - 1]}
        tier = {t for t in tier if (t >> 1) in tails}
    if j < len(tiers) - 1:
        heads = {y >> 1 for y in tiers[j + 1]}
        tier = {t for t in tier if (t & 3) in heads}
    return tier


def _clear_tiers(tiers: list[set], rng: random.Random | None = None) -> list[set]:
    if rng is not None:
        # one line at a time in random order; the fixpoint must not depend on it
        while True:
            bad = [(j, t) for j, tier in enumerate(tiers) for t in tier if not _compatible(tiers, j, t)]
            if not bad:
                break
            j, t = rng.choice(bad)
            tiers[j].discard(t)
    else:
        work = list(range(len(tiers)))
        queued = set(work)
        while work:
            j = work.pop()
            queued.discard(j)
            keep = _supported(tiers, j)
            if len(keep) != len(tiers[j]):
                tiers[j] = keep
                if not keep:
                    break
                for nb in (j - 1, j + 1):
                    if 0 <= nb < len(tiers) and nb not in queued:
                        queued.add(nb)
                        work.append(nb)
    if any(not t for t in tiers):
        return [set() for _ in tiers]
    return tiers


def clear(cts: Cts, random_state: int | random.Random | None = None) -> Cts:
    """Remove non-compatible lines until every line adjoins both neighbouring tiers."""
    rng = _rng(random_state)
    return Cts(cts.permutation, tuple(_clear_tiers([set(t) for t in cts.tiers], rng)))


def noncompatible_lines(cts: Cts) -> set[tuple[int, int]]:
    """(tier, triplet) pairs that clearing would remove."""
    cleared = clear(cts)
    return {(j, t) for j, tier in enumerate(cts.tiers) for t in tier if t not in cleared.tiers[j]}


def _rng(random_state):
    if random_state is None or isinstance(random_state, random.Random):
        return random_state
    return random.Random(random_state)


def build_cts(ctf: CtFormula) -> Cts:
    if ctf.n < 3:
        raise ValueError("a triplets structure needs n >= 3")
    raw = Cts(ctf.permutation, tuple(ALL_TRIPLETS - t for t in ctf.tiers))
    return clear(raw)


def is_elementary(cts: Cts) -> bool:
    return not cts.empty and all(len(t) == 1 for t in cts.tiers)


def _sequences(cts: Cts, cap: int) -> list[int]:
    """Adjoined sequences as ints in permutation order (MSB = first position)."""
    if cts.empty:
        return []
    out = list(cts.tiers[0])
    for tier in cts.tiers[1:]:
        by_prefix: dict[int, list[int]] = {}
        for t in tier:
            by_prefix.setdefault(t >> 1, []).append(t & 1)
        out = [(s << 1) | b for s in out for b in by_prefix.get(s & 3, ())]
        if len(out) > cap:
            raise EnumerationOverflow(f"more than {cap} coded sets")
    return out


def to_base_order(seq: int, permutation: Permutation) -> str:
    n = len(permutation)
    bits = ["0"] * n
    for i, v in enumerate(permutation):
        bits[v] = "1" if (seq >> (n - 1 - i)) & 1 else "0"
    return "".join(bits)


def enumerate_sets(cts: Cts, cap: int = 1 << 16) -> set[str]:
    """All coded assignments, as bit strings in base variable order."""
    seqs = _sequences(cts, cap)
    if len(seqs) > cap:
        raise EnumerationOverflow(f"more than {cap} coded sets")
    return {to_base_order(s, cts.permutation) for s in seqs}


def constants(cts: Cts) -> dict[int, int]:
    """Variables whose column holds a single value in every tier containing it."""
    out = {}
    last = len(cts.tiers) - 1
    for i, v in enumerate(cts.permutation):
        vals = set()
        for s in range(max(0, i - 2), min(i, last) + 1):
            vals.update(tbit(t, i - s) for t in cts.tiers[s])
        if len(vals) == 1:
            out[v] = vals.pop()
    return out


def _window_pairs(perm: Permutation, n_tiers: int):
    """(x, y) -> [(tier, offset_x, offset_y)] for pairs sharing a triplet window."""
    pairs: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    for s in range(n_tiers):
        for a, b in ((0, 1), (0, 2), (1, 2)):
            x, y = perm[s + a], perm[s + b]
            if x < y:
                pairs.setdefault((x, y), []).append((s, a, b))
            else:
                pairs.setdefault((y, x), []).append((s, b, a))
    return pairs


def unify(system: CtsSystem, random_state: int | random.Random | None = None) -> tuple[CtsSystem, bool]:
    """Joint simplification of discordant structures.

    Rule 1 propagates constants to every structure, rule 2 intersects the
    value combinations of variable pairs that share a triplet window in two
    or more structures, and every removal wave is followed by clearing.
    Returns the reduced system and whether it is empty.
    """
    rng = _rng(random_state)
    if system.empty:
        return system, True
    perms = [s.permutation for s in system.structures]
    tiers = [[set(t) for t in s.tiers] for s in system.structures]
    windows = [_window_pairs(p, len(t)) for p, t in zip(perms, tiers)]
    shared: dict[tuple[int, int], list[int]] = {}
    for r, w in enumerate(windows):
        for pair in w:
            shared.setdefault(pair, []).append(r)
    shared = {pair: rs for pair, rs in shared.items() if len(rs) >= 2}

    def snapshot():
        return CtsSystem(tuple(Cts(p, tuple(t)) for p, t in zip(perms, tiers)), system.n)

    def reclear() -> bool:
        for r in sorted(dirty) if rng is None else order:
            tiers[r] = _clear_tiers(tiers[r], rng)
            if not tiers[r][0]:
                return False
        dirty.clear()
        return True

    def empty_result():
        return CtsSystem(tuple(Cts(p, tuple(set() for _ in t)) for p, t in zip(perms, tiers)),
                         system.n), True

    order = list(range(len(tiers)))
    pair_order = sorted(shared)
    dirty = set(order)
    while True:
        changed = False
        # rule 1
        consts: dict[int, int] = {}
        for r in order:
            for v, b in constants(Cts(perms[r], tuple(tiers[r]))).items():
                if consts.setdefault(v, b) != b:
                    return empty_result()
        if rng is not None:
            rng.shuffle(order)
        for r in order:
            perm = perms[r]
            for s, tier in enumerate(tiers[r]):
                fixed = [(o, consts[perm[s + o]]) for o in range(3) if perm[s + o] in consts]
                if not fixed:
                    continue
                keep = {t for t in tier if all(tbit(t, o) == b for o, b in fixed)}
                if len(keep) != len(tier):
                    tiers[r][s] = keep
                    dirty.add(r)
                    changed = True
        if not reclear():
            return empty_result()
        # rule 2
        if rng is not None:
            rng.shuffle(pair_order)
        for pair in pair_order:
            rs = shared[pair]
            combos = []
            for r in rs:
                seen = None
                for s, a, b in windows[r][pair]:
                    look = _PAIR[a][b]
                    c = {look[t] for t in tiers[r][s]}
                    seen = c if seen is None else seen & c
                combos.append(seen)
            common = set.intersection(*combos)
            for r in rs:
                for s, a, b in windows[r][pair]:
                    look = _PAIR[a][b]
                    tier = tiers[r][s]
                    keep = {t for t in tier if look[t] in common}
                    if len(keep) != len(tier):
                        tiers[r][s] = keep
                        dirty.add(r)
                        changed = True
        if not reclear():
            return empty_result()
        if not changed:
            return snapshot(), False


def cts_from_json(data: dict) -> Cts:
    return Cts.from_bits([v - 1 for v in data["permutation"]], data["tiers"])


def combos_in_window(cts: Cts, x: int, y: int) -> set[tuple[int, int]] | None:
    """Observed (x, y) value pairs if the two share a window in ``cts``."""
    w = _window_pairs(cts.permutation, len(cts.tiers))
    key, flip = ((x, y), False) if x < y else ((y, x), True)
    if key not in w:
        return None
    seen = None
    for s, a, b in w[key]:
        c = {(tbit(t, a), tbit(t, b)) for t in cts.tiers[s]}
        seen = c if seen is None else seen & c
    if flip:
        seen = {(b, a) for a, b in seen}
    return seen

