"""Words in the generators, standard forms, and the unique normal form.

A word is a list of letters x_s^k / y_s^k (y-subscripts must be nonconstant)
plus, internally, opaque tree-pair tokens.  The engine rewrites any word into
the canonical pair (reduced tree pair, sorted cancellation- and
contraction-free y-letter sequence), which is the unique representative of
the group element; two words are equal in the group iff they normalize to
the same pair.

The rewriting rules used are exactly the group identities:
  - rearranging   y_t^i x_s^±1  ->  x_s^±1 y_{t'}^i   (t' the image of t)
  - expansion     y_s   ->  x_s y_{s0} y_{s10}^-1 y_{s11}
  - commuting     y_u y_v = y_v y_u for incompatible u, v
  - exponent split/merge and deletion of y^i y^-i
"""

from typing import NamedTuple

from .binseq import incompatible, is_constant, lex_key
from .thompson import IDENTITY, TreePair, compose, x_gen


class BudgetExceeded(RuntimeError):
    """Raised when the rewriting engine exceeds its step budget."""


class Letter(NamedTuple):
    kind: str  # 'x' or 'y'
    sub: str
    exp: int

    def inverse(self):
        return Letter(self.kind, self.sub, -self.exp)

    def render(self):
        base = f"{self.kind}[{self.sub}]"
        return base if self.exp == 1 else f"{base}^{self.exp}"


def letter(kind, sub, exp=1):
    if kind not in ("x", "y"):
        raise ValueError(f"bad letter kind {kind!r}")
    if kind == "y" and is_constant(sub):
        raise ValueError(f"y-subscript must be nonconstant: {sub!r}")
    if exp == 0:
        raise ValueError("letter exponent must be nonzero")
    return Letter(kind, sub, exp)


class FToken(NamedTuple):
    """An opaque tree-pair factor inside a word being rewritten."""

    pair: TreePair


def inverse_word(letters):
    out = []
    for item in reversed(list(letters)):
        if isinstance(item, FToken):
            out.append(FToken(item.pair.invert()))
        else:
            out.append(item.inverse())
    return out


def _merge(items):
    out = []
    for item in items:
        if isinstance(item, FToken):
            if item.pair.is_identity():
                continue
            if out and isinstance(out[-1], FToken):
                p = compose(out[-1].pair, item.pair)
                out.pop()
                if not p.is_identity():
                    out.append(FToken(p))
                continue
            out.append(item)
            continue
        if item.exp == 0:
            continue
        if (
            out
            and isinstance(out[-1], Letter)
            and out[-1].kind == item.kind
            and out[-1].sub == item.sub
        ):
            e = out[-1].exp + item.exp
            out.pop()
            if e != 0:
                out.append(Letter(item.kind, item.sub, e))
            continue
        out.append(item)
    return out


def _expand_pos(sub):
    return [
        Letter("x", sub, 1),
        Letter("y", sub + "0", 1),
        Letter("y", sub + "10", -1),
        Letter("y", sub + "11", 1),
    ]


def _expand_neg(sub):
    return [
        Letter("y", sub + "11", -1),
        Letter("y", sub + "10", 1),
        Letter("y", sub + "0", -1),
        Letter("x", sub, -1),
    ]


def expand_unit(sub, sign):
    """One expansion step of y_sub^sign as a letter list."""
    return _expand_pos(sub) if sign > 0 else _expand_neg(sub)


def _expand_leftmost(lt):
    sign = 1 if lt.exp > 0 else -1
    rest = lt.exp - sign
    out = expand_unit(lt.sub, sign)
    if rest:
        out = out + [Letter("y", lt.sub, rest)]
    return out


def _expand_rightmost(lt):
    sign = 1 if lt.exp > 0 else -1
    rest = lt.exp - sign
    out = expand_unit(lt.sub, sign)
    if rest:
        out = [Letter("y", lt.sub, rest)] + out
    return out


class _Budget:
    def __init__(self, n):
        self.left = n

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded("rewriting step budget exhausted")


def _is_y(item):
    return isinstance(item, Letter) and item.kind == "y"


def _is_xish(item):
    return isinstance(item, FToken) or (
        isinstance(item, Letter) and item.kind == "x"
    )


def standardize(items, budget=None):
    """Rewrite to a standard form: all x-factors at the front, and among the
    y-letters any letter whose subscript extends another's occurs earlier.
    Equal-subscript letters are merged.  Preserves the group element."""
    if budget is None:
        budget = _Budget(500_000)
    items = _merge(list(items))
    while True:
        changed = False
        # 1: a y-letter immediately before an x-factor: rearrange or expand
        for i in range(len(items) - 1):
            a, b = items[i], items[i + 1]
            if _is_y(a) and _is_xish(b):
                budget.spend()
                if isinstance(b, FToken):
                    t2 = b.pair.act_on_word(a.sub)
                    if t2 is not None:
                        items[i:i + 2] = [b, Letter("y", t2, a.exp)]
                    else:
                        items[i:i + 1] = _expand_rightmost(a)
                else:
                    xsign = 1 if b.exp > 0 else -1
                    g = x_gen(b.sub)
                    if xsign < 0:
                        g = g.invert()
                    t2 = g.act_on_word(a.sub)
                    if t2 is not None:
                        unit = Letter("x", b.sub, xsign)
                        rest = b.exp - xsign
                        repl = [unit, Letter("y", t2, a.exp)]
                        if rest:
                            repl.append(Letter("x", b.sub, rest))
                        items[i:i + 2] = repl
                    else:
                        items[i:i + 1] = _expand_rightmost(a)
                changed = True
                break
        if changed:
            items = _merge(items)
            continue
        # 2: merge equal-subscript y-letters separated by incompatible letters
        for i in range(len(items)):
            if not _is_y(items[i]):
                continue
            for j in range(i + 1, len(items)):
                if not _is_y(items[j]):
                    break
                if items[j].sub == items[i].sub:
                    if all(
                        incompatible(items[k].sub, items[i].sub)
                        for k in range(i + 1, j)
                    ):
                        budget.spend()
                        e = items[i].exp + items[j].exp
                        del items[j]
                        if e:
                            items[i] = Letter("y", items[i].sub, e)
                        else:
                            del items[i]
                        changed = True
                    break
            if changed:
                break
        if changed:
            items = _merge(items)
            continue
        # 3: ordering: a y-letter must not precede a y-letter whose subscript
        # it properly prefixes; expand the shallow one
        for i in range(len(items)):
            if not _is_y(items[i]):
                continue
            for j in range(i + 1, len(items)):
                if not _is_y(items[j]):
                    continue
                si, sj = items[i].sub, items[j].sub
                if si != sj and sj.startswith(si):
                    budget.spend()
                    items[i:i + 1] = _expand_leftmost(items[i])
                    changed = True
                    break
            if changed:
                break
        if changed:
            items = _merge(items)
            continue
        return items


def split_standard(items):
    """Split a standardized list into (TreePair, y-letter list)."""
    f = IDENTITY
    ys = []
    for item in items:
        if isinstance(item, FToken):
            f = compose(f, item.pair)
        elif item.kind == "x":
            g = x_gen(item.sub)
            if item.exp < 0:
                g = g.invert()
            for _ in range(abs(item.exp)):
                f = compose(f, g)
        else:
            ys.append(item)
    return f, ys


# ---------------------------------------------------------------------------
# potential cancellations


def _outer_reduce(o, buf):
    """Greedily let the left symbol (sign o) consume the digit buffer to its
    right; returns the resulting sign and leftover buffer."""
    while True:
        if o > 0:
            if buf.startswith("00"):
                buf = buf[2:]
            elif buf.startswith("01"):
                buf = buf[2:]
                o = -o
            elif buf.startswith("1"):
                buf = buf[1:]
            else:
                return o, buf
        else:
            if buf.startswith("10"):
                buf = buf[2:]
                o = -o
            elif buf.startswith("11"):
                buf = buf[2:]
            elif buf.startswith("0"):
                buf = buf[1:]
            else:
                return o, buf


def _inner_emissions(i):
    """Possible one-step emissions of the right symbol: (digits, new sign)."""
    if i > 0:
        return (("0", i), ("10", -i), ("11", i))
    return (("00", i), ("01", -i), ("1", i))


def pair_potential_cancellation(outer, inner):
    """Whether the two-symbol calculation of y_inner y_outer on a sequence
    extending the inner subscript can bring the symbols together with
    opposite signs.

    `outer` and `inner` are (subscript, sign) with the outer subscript a
    proper prefix of the inner one.  Decided by finite-state reachability:
    a state is (left sign, leftover digit buffer, right sign) and accepting
    states have an empty buffer and opposite signs.
    """
    (s, t), (u, v) = outer, inner
    if not (u.startswith(s) and u != s):
        raise ValueError("outer subscript must properly prefix the inner one")
    if t not in (1, -1) or v not in (1, -1):
        raise ValueError("signs must be +1 or -1")
    o0, buf0 = _outer_reduce(t, u[len(s):])
    start = (o0, buf0, v)
    seen = {start}
    frontier = [start]
    while frontier:
        o, buf, i = frontier.pop()
        if buf == "" and o == -i:
            return True
        for digits, i2 in _inner_emissions(i):
            o2, buf2 = _outer_reduce(o, buf + digits)
            st = (o2, buf2, i2)
            if st not in seen:
                seen.add(st)
                frontier.append(st)
    return False


def pair_cancellation_bruteforce(outer, inner, depth=8):
    """Reference decision for pair_potential_cancellation: simulate the
    two-symbol calculation over every tail of the given length."""
    (s, t), (u, v) = outer, inner
    if not (u.startswith(s) and u != s):
        raise ValueError("outer subscript must properly prefix the inner one")
    for n in range(1 << depth):
        tail = format(n, f"0{depth}b")
        o, buf = _outer_reduce(t, u[len(s):])
        i = v
        pos = 0
        if buf == "" and o == -i:
            return True
        while True:
            # right symbol consumes from the tail
            if i > 0:
                if tail.startswith("00", pos):
                    emit, pos = "0", pos + 2
                elif tail.startswith("01", pos):
                    emit, pos, i = "10", pos + 2, -i
                elif tail.startswith("1", pos) and pos < depth:
                    emit, pos = "11", pos + 1
                else:
                    break
            else:
                if tail.startswith("10", pos):
                    emit, pos, i = "01", pos + 2, -i
                elif tail.startswith("11", pos):
                    emit, pos = "1", pos + 2
                elif tail.startswith("0", pos) and pos < depth:
                    emit, pos = "00", pos + 1
                else:
                    break
            o, buf = _outer_reduce(o, buf + emit)
            if buf == "" and o == -i:
                return True
    return False


def neighboring_pairs(ys):
    """All (outer_index, inner_index) pairs of y-letters where the outer
    subscript properly prefixes the inner one with no occurring subscript
    strictly between them in the prefix order.  The inner letter is the
    earlier (deeper) one."""
    subs = {lt.sub for lt in ys}
    out = []
    for i, inner in enumerate(ys):
        for j in range(i + 1, len(ys)):
            outer = ys[j]
            si, sj = inner.sub, outer.sub
            if si != sj and si.startswith(sj):
                if not any(
                    u in subs
                    for u in (si[:k] for k in range(len(sj) + 1, len(si)))
                ):
                    out.append((j, i))
    return out


def has_potential_cancellation(ys):
    """Whether a standard-form y-letter list admits a cancellation between
    some neighboring pair."""
    for j, i in neighboring_pairs(ys):
        outer, inner = ys[j], ys[i]
        if pair_potential_cancellation(
            (outer.sub, 1 if outer.exp > 0 else -1),
            (inner.sub, 1 if inner.exp > 0 else -1),
        ):
            return (j, i)
    return None


def remove_potential_cancellations(items, budget=None):
    """Rewrite a word so that no neighboring pair admits a cancellation.
    Flagged pairs are resolved by expanding the shallow letter; the expansion
    offspring either separate from or exactly cancel against the deep one."""
    if budget is None:
        budget = _Budget(500_000)
    items = standardize(items, budget)
    while True:
        _, ys = split_standard(items)
        flagged = []
        for j, i in neighboring_pairs(ys):
            outer, inner = ys[j], ys[i]
            if pair_potential_cancellation(
                (outer.sub, 1 if outer.exp > 0 else -1),
                (inner.sub, 1 if inner.exp > 0 else -1),
            ):
                flagged.append((len(inner.sub) - len(outer.sub), j, i))
        if not flagged:
            return items
        _, j, _ = min(flagged)
        budget.spend()
        # expand the outer (shallow, later) letter of the tightest pair
        target = ys[j]
        pos = next(
            k
            for k, item in enumerate(items)
            if _is_y(item)
            and sum(_is_y(x) for x in items[:k]) == j
        )
        items[pos:pos + 1] = _expand_leftmost(target)
        items = standardize(items, budget)


# ---------------------------------------------------------------------------
# potential contractions


def find_potential_contraction(ys):
    """Locate a contractible triple in a cancellation-free sorted y-word.
    Returns (case, pivot) or None.  Case 1 is y_{s0} y_{s10}^-1 y_{s11} with
    no y_{s1} letter; case 2 is y_{s00}^-1 y_{s01} y_{s1}^-1 with no y_{s0}."""
    exps = {lt.sub: lt.exp for lt in ys}
    for sub in exps:
        if sub.endswith("0"):
            s = sub[:-1]
            if (
                exps[sub] > 0
                and exps.get(s + "10", 0) < 0
                and exps.get(s + "11", 0) > 0
                and (s + "1") not in exps
            ):
                return (1, s)
        if sub.endswith("00"):
            s = sub[:-2]
            if (
                exps[sub] < 0
                and exps.get(s + "01", 0) > 0
                and exps.get(s + "1", 0) < 0
                and (s + "0") not in exps
            ):
                return (2, s)
    return None


def _apply_contraction(f, ys, case, s):
    """Replace the matched triple by its one-letter equivalent (times a tree
    pair factor) inside the word f·ys; returns a raw item list."""
    if case == 1:
        triple = {s + "0": 1, s + "10": -1, s + "11": 1}
        repl = [FToken(x_gen(s).invert()), Letter("y", s, 1)]
        last = s + "11"
    else:
        triple = {s + "00": -1, s + "01": 1, s + "1": -1}
        repl = [FToken(x_gen(s)), Letter("y", s, -1)]
        last = s + "1"
    out = [FToken(f)]
    inserted = False
    for lt in ys:
        if lt.sub in triple:
            e = lt.exp - triple[lt.sub]
            if e:
                out.append(Letter("y", lt.sub, e))
            if lt.sub == last:
                out.extend(repl)
                inserted = True
        else:
            out.append(lt)
    assert inserted
    return out


# ---------------------------------------------------------------------------
# normal forms


def _lex_sorted(ys):
    # in a standard form every compatible pair is already in lex order, so
    # sorting only commutes incompatible letters
    return sorted(ys, key=lambda lt: lex_key(lt.sub))


class GNormal(NamedTuple):
    """The unique normal form: a reduced tree pair times a sorted,
    cancellation- and contraction-free y-letter sequence."""

    f: TreePair
    ys: tuple

    def is_identity(self):
        return self.f.is_identity() and not self.ys

    def to_items(self):
        return [FToken(self.f)] + list(self.ys)

    def render(self):
        parts = []
        if not self.f.is_identity():
            dom = ",".join(w or "ε" for w in self.f.domain)
            rng = ",".join(w or "ε" for w in self.f.range)
            parts.append(f"<{dom}|{rng}>")
        parts.extend(lt.render() for lt in self.ys)
        return " ".join(parts) if parts else "1"


IDENTITY_NORMAL = GNormal(IDENTITY, ())


_NORMALIZE_CACHE = {}


def normalize(word, budget=None):
    """The unique normal form of a word (letters and/or tree-pair tokens)."""
    key = None
    if budget is None:
        key = tuple(word)
        cached = _NORMALIZE_CACHE.get(key)
        if cached is not None:
            return cached
        budget = _Budget(500_000)
        word = key
    items = remove_potential_cancellations(list(word), budget)
    while True:
        f, ys = split_standard(items)
        ys = _lex_sorted(ys)
        found = find_potential_contraction(ys)
        if found is None:
            out = GNormal(f, tuple(ys))
            if key is not None:
                if len(_NORMALIZE_CACHE) > 1_000_000:
                    _NORMALIZE_CACHE.clear()
                _NORMALIZE_CACHE[key] = out
            return out
        budget.spend()
        items = _apply_contraction(f, ys, *found)
        items = remove_potential_cancellations(items, budget)


def normalize_product(*factors, budget=None):
    """Normal form of a product whose factors are words, letters or normal
    forms."""
    items = []
    for fac in factors:
        if isinstance(fac, GNormal):
            items.extend(fac.to_items())
        elif isinstance(fac, (Letter, FToken)):
            items.append(fac)
        elif isinstance(fac, TreePair):
            items.append(FToken(fac))
        else:
            items.extend(fac)
    return normalize(items, budget=budget)


def invert_normal(n):
    """Normal form of the inverse of a normal form."""
    return normalize(inverse_word(n.to_items()))


def equal_words(w1, w2):
    return normalize(list(w1)) == normalize(list(w2))
