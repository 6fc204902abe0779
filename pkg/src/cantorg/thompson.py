"""Reduced tree pairs: the prefix-replacement homeomorphisms that form the
x-part of every word.

A tree pair stores two complete prefix codes of equal size; the i-th domain
leaf maps to the i-th range leaf.  A pair is reduced when no adjacent leaf
pair is a sibling pair in both trees simultaneously; reduced pairs are the
canonical representatives, compared structurally.

Convention: these act on the right.  `compose(f, g)` is "apply f, then g",
so act_on_seq(compose(f, g), xi) == act_on_seq(g, act_on_seq(f, xi)).
"""

import functools

from .binseq import RationalSeq, check_bits, incompatible


def _is_complete_code(leaves):
    """Whether a sorted tuple of distinct words is a complete prefix code:
    prefix-free (in a sorted list any prefix sits next to an extension) with
    cone measures summing to one."""
    if len(set(leaves)) != len(leaves):
        return False
    if leaves == ("",):
        return True
    if any(b.startswith(a) for a, b in zip(leaves, leaves[1:])):
        return False
    depth = max(len(w) for w in leaves)
    return sum(2 ** (depth - len(w)) for w in leaves) == 2**depth


def _reduce(domain, rng):
    domain, rng = list(domain), list(rng)
    changed = True
    while changed:
        changed = False
        for i in range(len(domain) - 1):
            d0, d1 = domain[i], domain[i + 1]
            r0, r1 = rng[i], rng[i + 1]
            if (
                d0[:-1] == d1[:-1]
                and d0.endswith("0")
                and r0[:-1] == r1[:-1]
                and r0.endswith("0")
            ):
                domain[i:i + 2] = [d0[:-1]]
                rng[i:i + 2] = [r0[:-1]]
                changed = True
                break
    return tuple(domain), tuple(rng)


class TreePair:
    __slots__ = ("domain", "range")

    def __init__(self, domain, rng):
        pairs = sorted(zip(domain, rng))
        domain = tuple(d for d, _ in pairs)
        rng = tuple(r for _, r in pairs)
        if not all(isinstance(w, str) for w in domain + rng) or set(
            "".join(domain) + "".join(rng)
        ) - {"0", "1"}:
            raise ValueError("leaves must be binary words")
        if len(domain) != len(rng):
            raise ValueError("leaf counts differ")
        if not _is_complete_code(domain) or not _is_complete_code(tuple(sorted(rng))):
            raise ValueError("leaves do not form a complete binary tree")
        domain, rng = _reduce(domain, rng)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "range", rng)

    def __setattr__(self, name, value):
        raise AttributeError("TreePair is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, TreePair)
            and self.domain == other.domain
            and self.range == other.range
        )

    def __hash__(self):
        return hash((self.domain, self.range))

    def __repr__(self):
        body = ", ".join(
            f"{d or 'ε'}→{r or 'ε'}" for d, r in zip(self.domain, self.range)
        )
        return f"TreePair({body})"

    def is_identity(self):
        return self.domain == self.range

    def invert(self):
        return TreePair(self.range, self.domain)

    def act_on_word(self, t):
        """Image of the finite word t, or None when t is a proper prefix of a
        domain leaf (the action is undefined there)."""
        for d, r in zip(self.domain, self.range):
            if t.startswith(d):
                return r + t[len(d):]
        return None

    def act_on_seq(self, xi):
        for d, r in zip(self.domain, self.range):
            if xi.starts_with(d):
                return xi.drop(len(d)).prepend(r)
        raise AssertionError("complete code must match some prefix")

    def fixes_cone(self, s):
        """True iff the map restricted to cone(s) is the identity."""
        return all(
            incompatible(d, s) or d == r
            for d, r in zip(self.domain, self.range)
        )

    def moved_cones(self):
        """Union of domain cones on which the map is not the identity,
        as a list of prefixes (not canonicalized)."""
        return [d for d, r in zip(self.domain, self.range) if d != r]


IDENTITY = TreePair(("",), ("",))


@functools.lru_cache(maxsize=None)
def x_gen(s):
    """The basic generator localized at s: inside cone(s) it maps
    s00→s0, s01→s10, s1→s11 and is the identity elsewhere."""
    check_bits(s)
    off = [s[:i] + ("1" if s[i] == "0" else "0") for i in range(len(s))]
    domain = off + [s + "00", s + "01", s + "1"]
    rng = off + [s + "0", s + "10", s + "11"]
    return TreePair(domain, rng)


def compose(f, g):
    """The pair acting as f followed by g (right-action order)."""
    common = {
        (a if len(a) >= len(b) else b)
        for a in f.range
        for b in g.domain
        if not incompatible(a, b)
    }
    doms, rngs = [], []
    for e in sorted(common):
        i = next(i for i, r in enumerate(f.range) if e.startswith(r))
        j = next(j for j, d in enumerate(g.domain) if e.startswith(d))
        doms.append(f.domain[i] + e[len(f.range[i]):])
        rngs.append(g.range[j] + e[len(g.domain[j]):])
    return TreePair(doms, rngs)


def compose_all(pairs):
    out = IDENTITY
    for p in pairs:
        out = compose(out, p)
    return out


def power(f, n):
    if n < 0:
        return power(f.invert(), -n)
    out = IDENTITY
    for _ in range(n):
        out = compose(out, f)
    return out
