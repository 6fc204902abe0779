"""Contraction of edge loops to the trivial loop.

A loop is a closed edge path of coset vertices starting and ending at the
base vertex.  The contraction emits a certificate: a sequence of elementary
moves (split of a diagonal edge, expansion, rearrangement, commuting,
cancellation), each replacing a subpath by a homotopic subpath inside a
cluster, ending at the trivial loop.  Moves that use a cluster record its
parameters, so every move can be re-checked locally from the certificate
alone.
"""

from .binseq import incompatible, lex_key
from .complexes import is_one_cell, vertex_of
from .rewrite import (
    FToken,
    Letter,
    _is_xish,
    _is_y,
    expand_unit,
    find_potential_contraction,
    inverse_word,
    neighboring_pairs,
    normalize,
    pair_potential_cancellation,
    x_gen,
)
from .special import from_letters, independent, is_special
from .thompson import compose

TRIVIAL = ()

SPLIT = "split"
EXPANSION = "expansion"
REARRANGEMENT = "rearrangement"
COMMUTING = "commuting"
CANCELLATION = "cancellation"


def _edge_normal(u, v):
    """The normal form of u * v^-1; its letter part labels the edge from u
    to v and its tree-pair factor realigns the suffix representatives."""
    nf = normalize(list(u) + inverse_word(list(v)))
    if not is_special(from_letters(nf.ys)):
        raise ValueError("consecutive loop vertices are not joined by an edge")
    return nf


def path_of(items):
    """Suffix cosets of a word at each percolating letter; the closed path
    the word spells from the base vertex."""
    verts = [
        vertex_of(items[i:]) for i, it in enumerate(items) if _is_y(it)
    ]
    verts.append(TRIVIAL)
    return verts


def _tail_pair(tail):
    """The tree-pair factor aligning a word suffix with the canonical
    representative of its coset."""
    return normalize(list(tail)).f


def _conj_form(letter, psi):
    """The canonical special form of a single letter conjugated into the
    coordinates of the suffix representative."""
    items = [letter]
    if not psi.is_identity():
        items.append(FToken(psi))
    return from_letters(normalize(items).ys)


class _Contraction:
    def __init__(self, max_moves):
        self.max_moves = max_moves
        self.moves = []

    def emit(self, kind, path, params=None):
        self.moves.append((kind, list(path), params))
        if len(self.moves) > self.max_moves:
            raise RuntimeError("loop contraction exceeded the move budget")


def contract_loop(loop, max_moves=20_000):
    """Contract a loop at the base vertex to the trivial loop.  Returns the
    move certificate, beginning with ("start", the input path, None) and
    ending with a path of base vertices only."""
    loop = [tuple(v) for v in loop]
    if len(loop) < 1 or loop[0] != TRIVIAL or loop[-1] != TRIVIAL:
        raise ValueError("loop must start and end at the base vertex")
    normals = [_edge_normal(u, v) for u, v in zip(loop, loop[1:])]
    state = _Contraction(max_moves)
    state.emit("start", loop)

    # phase 1: split every diagonal edge into single-letter edges; the
    # intermediate vertices are the suffix cosets of the exact loop word
    letters = []
    spans = []
    for nf in normals:
        if not nf.f.is_identity():
            letters.append(FToken(nf.f))
        spans.append((len(letters), len(nf.ys)))
        letters.extend(nf.ys)
    fine = path_of(letters)
    path = list(loop)
    pos = 0
    li = 0
    for start, k in spans:
        if fine[li] != path[pos]:
            raise AssertionError("split phase lost track of the path")
        if k > 1:
            psi = _tail_pair(letters[start + k:])
            parts = [_conj_form(lt, psi) for lt in letters[start:start + k]]
            for t in range(k - 1):
                rest = tuple(
                    lt for f in parts[t + 1:] for lt in f
                )
                params = (parts[t], from_letters(normalize(
                    [Letter("y", s, sg) for s, sg in rest]).ys))
                path.insert(pos + 1 + t, fine[li + 1 + t])
                state.emit(SPLIT, path, params)
        pos += k
        li += k

    items = letters
    if path_of(items) != path:
        raise AssertionError("split phase lost track of the path")

    # phase 2: drive the single-letter word to the empty word
    while True:
        items = _standardize_moves(items, state)
        items = _remove_cancellations_moves(items, state)
        items = _sort_moves(items, state)
        ys = [it for it in items if _is_y(it)]
        found = find_potential_contraction(_merged(ys))
        if found is None:
            break
        items = _contract_moves(items, state, *found)
    if any(_is_y(it) for it in items):
        raise AssertionError("loop word did not reduce inside F")
    return state.moves


def _merged(ys):
    out = []
    for lt in ys:
        if out and out[-1].sub == lt.sub:
            e = out[-1].exp + lt.exp
            out.pop()
            if e:
                out.append(Letter("y", lt.sub, e))
        else:
            out.append(lt)
    return out


def _as_pair(item):
    if isinstance(item, FToken):
        return item.pair
    g = x_gen(item.sub)
    return g.invert() if item.exp < 0 else g


def _compose_x(items, i):
    # merge adjacent tree-pair factors; the path is unaffected
    p = compose(_as_pair(items[i]), _as_pair(items[i + 1]))
    items[i:i + 2] = [] if p.is_identity() else [FToken(p)]


def _expand_item(items, state, i):
    """Expand the unit letter at index i into its one-step substitution and
    emit the expansion move with the cluster parameters at the suffix."""
    lt = items[i]
    block = expand_unit(lt.sub, 1 if lt.exp > 0 else -1)
    items[i:i + 1] = block
    if lt.exp > 0:
        children = items[i + 1:i + 4]
        tail = items[i + 4:]
    else:
        children = items[i:i + 3]
        tail = items[i + 3:]
    psi = _tail_pair(tail)
    params = tuple(_conj_form(c, psi) for c in children)
    state.emit(EXPANSION, path_of(items), params)


def _standardize_moves(items, state):
    """Unit-letter standardization with move emission: push tree-pair factors
    to the front, cancel adjacent inverse letters, merge equal subscripts,
    expand ordering violations."""
    while True:
        changed = False
        for i in range(len(items) - 1):
            if _is_xish(items[i]) and _is_xish(items[i + 1]):
                _compose_x(items, i)
                changed = True
                break
            a, b = items[i], items[i + 1]
            if _is_y(a) and _is_xish(b):
                pair = _as_pair(b)
                t2 = pair.act_on_word(a.sub)
                if t2 is not None:
                    items[i:i + 2] = [b, Letter("y", t2, a.exp)]
                    state.emit(REARRANGEMENT, path_of(items))
                else:
                    _expand_item(items, state, i)
                changed = True
                break
            if (
                _is_y(a)
                and _is_y(b)
                and a.sub == b.sub
                and a.exp == -b.exp
            ):
                del items[i:i + 2]
                state.emit(CANCELLATION, path_of(items))
                changed = True
                break
        if changed:
            continue
        # merge equal subscripts separated by incompatible y-letters
        for i in range(len(items)):
            if not _is_y(items[i]):
                continue
            for j in range(i + 1, len(items)):
                if not _is_y(items[j]):
                    break
                if items[j].sub == items[i].sub:
                    if j > i + 1 and all(
                        incompatible(items[k].sub, items[i].sub)
                        for k in range(i + 1, j)
                    ):
                        _commute_to(items, state, j, i + 1)
                        changed = True
                    break
            if changed:
                break
        if changed:
            continue
        # ordering: expand a y-letter preceding an extension of its subscript
        for i in range(len(items)):
            if not _is_y(items[i]):
                continue
            for j in range(i + 1, len(items)):
                if not _is_y(items[j]):
                    continue
                si, sj = items[i].sub, items[j].sub
                if si != sj and sj.startswith(si):
                    _expand_item(items, state, i)
                    changed = True
                    break
            if changed:
                break
        if not changed:
            return items


def _commute_to(items, state, src, dst):
    """Move the y-letter at src to index dst by adjacent commuting swaps,
    emitting one move per swap."""
    step = -1 if dst < src else 1
    k = src
    while k != dst:
        other = items[k + step]
        if not incompatible(items[k].sub, other.sub):
            raise AssertionError("tried to commute a compatible pair")
        lo = min(k, k + step)
        second = items[lo + 1]
        items[k], items[k + step] = items[k + step], items[k]
        psi = _tail_pair(items[lo + 2:])
        params = (
            _conj_form(second, psi),
            _conj_form(items[lo + 1], psi),
        )
        state.emit(COMMUTING, path_of(items), params)
        k += step


def _remove_cancellations_moves(items, state):
    while True:
        ys = _merged([it for it in items if _is_y(it)])
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
        target = ys[j].sub
        pos = next(
            k for k, it in enumerate(items) if _is_y(it) and it.sub == target
        )
        _expand_item(items, state, pos)
        items = _standardize_moves(items, state)


def _sort_moves(items, state):
    """Bubble-sort the y-letters into lex order by commuting swaps."""
    start = next((k for k, it in enumerate(items) if _is_y(it)), len(items))
    while True:
        swapped = False
        for k in range(start, len(items) - 1):
            a, b = items[k], items[k + 1]
            if lex_key(a.sub) > lex_key(b.sub):
                _commute_to(items, state, k, k + 1)
                swapped = True
        if not swapped:
            return items


def _contract_moves(items, state, case, s):
    """Bring a contractible triple together by commuting moves and replace
    it by its one-letter equivalent (a reverse expansion)."""
    if case == 1:
        subs = (s + "0", s + "10", s + "11")
        signs = (1, -1, 1)
        repl = [FToken(x_gen(s).invert()), Letter("y", s, 1)]
    else:
        subs = (s + "00", s + "01", s + "1")
        signs = (-1, 1, -1)
        repl = [FToken(x_gen(s)), Letter("y", s, -1)]

    def unit_pos(sub, sign, last):
        idx = [
            k
            for k, it in enumerate(items)
            if _is_y(it) and it.sub == sub and it.exp == sign
        ]
        return idx[-1] if last else idx[0]

    # move the middle unit next to the third, then the first next to them
    p3 = unit_pos(subs[2], signs[2], last=False)
    p2 = unit_pos(subs[1], signs[1], last=True)
    _commute_to(items, state, p2, p3 - 1)
    p2 = p3 - 1
    p1 = unit_pos(subs[0], signs[0], last=True)
    _commute_to(items, state, p1, p2 - 1)
    base = p2 - 1
    assert [
        (it.sub, it.exp) for it in items[base:base + 3]
    ] == list(zip(subs, signs))
    psi = _tail_pair(items[base + 3:])
    params = tuple(_conj_form(c, psi) for c in items[base:base + 3])
    items[base:base + 3] = repl
    state.emit(EXPANSION, path_of(items), params)
    return items


# ---------------------------------------------------------------------------
# certificate validation


def _window(p, q):
    a = 0
    while a < len(p) and a < len(q) and p[a] == q[a]:
        a += 1
    b = 0
    while (
        b < len(p) - a and b < len(q) - a and p[len(p) - 1 - b] == q[len(q) - 1 - b]
    ):
        b += 1
    return a, p[a:len(p) - b], q[a:len(q) - b]


def _valid_path(path):
    return all(
        u != v and is_one_cell(u, v) for u, v in zip(path, path[1:])
    )


def _good_params(params):
    if not params or not all(is_special(f) for f in params):
        return False
    for i, f in enumerate(params):
        for g in params[i + 1:]:
            if not independent(f, g):
                return False
    return True


def _corner(params, v):
    word = [Letter("y", s, t) for f in params for s, t in f]
    return vertex_of(word + list(v))


def _facial_ok(params, long_path):
    """Whether the path is the descending facial walk of the cluster over
    its last vertex with the given parameters, one parameter per step."""
    if len(long_path) != len(params) + 1:
        return False
    v = long_path[-1]
    return all(
        _corner(params[j:], v) == long_path[j] for j in range(len(params))
    )


def check_certificate(loop, moves):
    """Re-verify a contraction certificate: the first entry matches the
    loop, each move is locally valid in a cluster given by its recorded
    parameters, and the final path is trivial."""
    loop = [tuple(v) for v in loop]
    if not all(isinstance(m, tuple) and len(m) == 3 for m in moves):
        return False
    if not moves or moves[0][:2] != ("start", loop):
        return False
    if len(loop) > 1 and not _valid_path(loop):
        return False
    last = moves[-1][1]
    if any(v != TRIVIAL for v in last):
        return False
    for (_, p, _), (kind, q, params) in zip(moves, moves[1:]):
        if q[0] != TRIVIAL or q[-1] != TRIVIAL:
            return False
        if not _valid_path(q):
            return False
        a, wp, wq = _window(p, q)
        if kind == REARRANGEMENT:
            if p != q:
                return False
        elif kind == CANCELLATION:
            if len(wp) != 2 or wq or a < 1 or a + 2 > len(p):
                return False
            if p[a - 1] != p[a + 1]:
                return False
        elif kind == COMMUTING:
            if len(wp) != 1 or len(wq) != 1 or a < 1:
                return False
            if not _good_params(params) or len(params) != 2:
                return False
            u, v = q[a - 1], q[a + 1]
            if _corner(params[:1], v) != wp[0]:
                return False
            if _corner(params[1:], v) != wq[0]:
                return False
            if _corner(params, v) != u:
                return False
        elif kind in (SPLIT, EXPANSION):
            if not _good_params(params):
                return False
            grow = len(params) - 1
            if grow < 1 or (kind == SPLIT and grow != 1):
                return False
            if len(wq) == grow and not wp:
                long, base = q, a
            elif kind == EXPANSION and len(wp) == grow and not wq:
                long, base = p, a
            else:
                return False
            if base < 1:
                return False
            window = long[base - 1:base + grow + 1]
            if not _facial_ok(params, window):
                return False
            # the replaced edge is a 1-cell of the cluster (the diagonal)
            if not is_one_cell(window[0], window[-1]):
                return False
        else:
            return False
    return True
