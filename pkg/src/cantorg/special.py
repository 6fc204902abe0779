"""Special forms and the right-coset calculus.

A special form is a sequence of (subscript, sign) letters whose subscripts
are consecutive leaves of some finite binary tree (left to right) and whose
signs strictly alternate.  Each special form labels an edge of the coset
complex; contraction to the fixpoint gives the unique minimal form, which is
also the canonical coset representative.
"""

from .binseq import incompatible, is_constant
from .rewrite import GNormal, Letter, normalize, normalize_product
from .thompson import TreePair


def to_letters(form):
    return [Letter("y", s, t) for s, t in form]


def from_letters(ys):
    out = []
    for lt in ys:
        sign = 1 if lt.exp > 0 else -1
        out.extend((lt.sub, sign) for _ in range(abs(lt.exp)))
    return tuple(out)


def pair_consecutive(s, t):
    """Whether s, t can be adjacent leaves of a binary tree, s on the left:
    s must be the rightmost leaf below c0 and t the leftmost below c1 for
    their common prefix c."""
    k = 0
    while k < min(len(s), len(t)) and s[k] == t[k]:
        k += 1
    if k >= len(s) or k >= len(t) or s[k] != "0" or t[k] != "1":
        return False
    return set(s[k + 1:]) <= {"1"} and set(t[k + 1:]) <= {"0"}


def list_checks(form):
    """The three list predicates: dictionary-sorted, consecutive-leaves, and
    strictly alternating signs."""
    subs = [s for s, _ in form]
    signs = [t for _, t in form]
    sorted_ok = all(a < b for a, b in zip(subs, subs[1:]))
    consecutive = all(pair_consecutive(a, b) for a, b in zip(subs, subs[1:]))
    alternating = all(a == -b for a, b in zip(signs, signs[1:]))
    return sorted_ok, consecutive, alternating


def is_special(form):
    if len(form) == 0:
        return False
    for s, t in form:
        if is_constant(s) or t not in (1, -1):
            return False
    sorted_ok, consecutive, alternating = list_checks(form)
    return sorted_ok and consecutive and alternating


def check_special(form):
    form = tuple(form)
    if not is_special(form):
        raise ValueError(f"not a special form: {form}")
    return form


def type_of(form):
    """Type 1 when the leading sign is negative, else type 2."""
    return 1 if form[0][1] == -1 else 2


def parity_of(form):
    return len(form) % 2


def expand_letter(s, t):
    if t > 0:
        return ((s + "0", 1), (s + "10", -1), (s + "11", 1))
    return ((s + "00", -1), (s + "01", 1), (s + "1", -1))


def expand_at(form, i):
    form = tuple(form)
    s, t = form[i]
    return form[:i] + expand_letter(s, t) + form[i + 1:]


def contract_at(form, i):
    """Inverse of expand_at: letters i..i+2 must be an expansion triple."""
    form = tuple(form)
    if i + 3 > len(form):
        raise ValueError("no room for a contraction at this index")
    a, b, c = form[i], form[i + 1], form[i + 2]
    for s, t in ((a[0][:-1], 1), (a[0][:-2], -1)):
        if len(a[0]) > (1 if t > 0 else 2) - 1 and (a, b, c) == expand_letter(s, t):
            return form[:i] + ((s, t),) + form[i + 3:]
    raise ValueError(f"letters at {i} do not match a contraction triple")


def minimal_form(form):
    """Contract to the fixpoint; the unique minimal representative of the
    coset of the form."""
    form = check_special(form)
    changed = True
    while changed:
        changed = False
        for i in range(len(form) - 2):
            try:
                form = contract_at(form, i)
            except ValueError:
                continue
            changed = True
            break
    return form


def independent(a, b):
    """All cross pairs of subscripts incompatible."""
    return all(incompatible(s, p) for s, _ in a for p, _ in b)


def product_is_special(forms):
    """Whether the concatenation of a sorted list of pairwise independent
    special forms is itself a special form."""
    forms = [check_special(f) for f in forms]
    for i, a in enumerate(forms):
        for b in forms[i + 1:]:
            if not independent(a, b):
                raise ValueError("forms are not pairwise independent")
    flat = tuple(lt for f in forms for lt in f)
    subs = [s for s, _ in flat]
    if any(a >= b for a, b in zip(subs, subs[1:])):
        raise ValueError("list of forms is not sorted")
    return is_special(flat)


def act_f(form, f):
    """The special form with subscripts carried through a tree pair, after
    expanding letters the pair does not yet act on.  Realizes right
    multiplication of the coset by the pair."""
    form = check_special(form)
    if not isinstance(f, TreePair):
        raise TypeError("act_f takes a tree pair")
    work = list(form)
    progress = True
    while progress:
        progress = False
        for i, (s, t) in enumerate(work):
            if f.act_on_word(s) is None:
                work[i:i + 1] = list(expand_letter(s, t))
                progress = True
                break
    return tuple((f.act_on_word(s), t) for s, t in work)


def coset_vertex(word):
    """The canonical right-coset representative (the y-part of the normal
    form) of a word, letter list, or normal form."""
    if isinstance(word, GNormal):
        return word.ys
    return normalize(list(word)).ys


def vertex_in_gamma(vertex):
    """Whether a coset representative is the minimal form of a special form
    (i.e. the coset is an edge label)."""
    return is_special(from_letters(vertex))


def stabilizes_coset(f, form):
    """Whether right multiplication by the pair fixes the coset of the
    special form."""
    form = check_special(form)
    base = coset_vertex(to_letters(form))
    moved = coset_vertex(normalize_product(to_letters(form), f))
    return base == moved


# ---------------------------------------------------------------------------
# descendant automaton and overlays


def descends(anc, dec):
    """Whether iterated expansion of the ancestor letter produces the
    descendant letter (equality counts).  Letters are (subscript, sign)."""
    c, sg = anc
    u, w = dec
    while True:
        if c == u:
            return sg == w
        if not u.startswith(c):
            return False
        rest = u[len(c):]
        if sg > 0:
            if rest.startswith("0"):
                c, sg = c + "0", 1
            elif rest.startswith("10"):
                c, sg = c + "10", -1
            elif rest.startswith("11"):
                c, sg = c + "11", 1
            else:
                return False
        else:
            if rest.startswith("00"):
                c, sg = c + "00", -1
            elif rest.startswith("01"):
                c, sg = c + "01", 1
            elif rest.startswith("1"):
                c, sg = c + "1", -1
            else:
                return False


def overlay(form_a, form_b):
    """Whether some expansions of the two minimal forms share a letter."""
    a = minimal_form(form_a)
    b = minimal_form(form_b)
    return any(
        descends(la, lb) or descends(lb, la) for la in a for lb in b
    )


def cancellation_free(form_a, form_b):
    return not overlay(form_a, form_b)


# ---------------------------------------------------------------------------
# the four orbit classes and explicit carriers


def complete_tree(subs):
    """Leaves of the minimal complete binary tree containing the given
    pairwise incompatible words as leaves, in left-to-right order."""

    def build(prefix):
        if any(s.startswith(prefix) and s != prefix for s in subs):
            return build(prefix + "0") + build(prefix + "1")
        return [prefix]

    return build("")


def _pad_left(leaves, k):
    leaves = list(leaves)
    for _ in range(k):
        w = leaves[0]
        leaves[0:1] = [w + "0", w + "1"]
    return leaves


def _pad_right(leaves, k):
    leaves = list(leaves)
    for _ in range(k):
        w = leaves[-1]
        leaves[-1:] = [w + "0", w + "1"]
    return leaves


def find_carrier(form_a, form_b):
    """An explicit tree pair carrying the coset of the first special form to
    the coset of the second, or None when they lie in different orbit
    classes.  Cosets share an orbit exactly when (type, parity) match."""
    a = minimal_form(form_a)
    b = minimal_form(form_b)
    if (type_of(a), parity_of(a)) != (type_of(b), parity_of(b)):
        return None
    # equalize lengths by expanding the first letter of the shorter form;
    # same type and parity force identical sign sequences afterwards
    while len(a) < len(b):
        a = expand_at(a, 0)
    while len(b) < len(a):
        b = expand_at(b, 0)
    assert [t for _, t in a] == [t for _, t in b]
    ta = complete_tree([s for s, _ in a])
    tb = complete_tree([s for s, _ in b])
    ia = ta.index(a[0][0])
    ib = tb.index(b[0][0])
    if ia < ib:
        ta = _pad_left(ta, ib - ia)
    else:
        tb = _pad_left(tb, ia - ib)
    ra = len(ta) - ta.index(a[-1][0]) - 1
    rb = len(tb) - tb.index(b[-1][0]) - 1
    if ra < rb:
        ta = _pad_right(ta, rb - ra)
    else:
        tb = _pad_right(tb, ra - rb)
    return TreePair(ta, tb)
