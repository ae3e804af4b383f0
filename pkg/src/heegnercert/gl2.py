"""Subgroups of GL2 over a finite field: closure, dihedral models, classification.

Matrices are 4-tuples (a, b, c, d) of field elements, row major.  The
classification buckets follow the standard trichotomy for subgroups H of
GL2(F_q): reducible; p | #H irreducible (contains SL2 of a subfield); p-prime
order inside a Cartan normalizer (cyclic or dihedral mod scalars); or
projectively A4/S4/A5.
"""

from __future__ import annotations

from dataclasses import dataclass

from .finitefield import FiniteField, build_field


class ClosureBoundExceeded(RuntimeError):
    pass


class ClassificationError(RuntimeError):
    pass


class OrderMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrix helpers
# ---------------------------------------------------------------------------

def mat_identity(F: FiniteField):
    return (F.one, F.zero, F.zero, F.one)


def mat_mul(F: FiniteField, A, B):
    a, b, c, d = A
    e, f_, g, h = B
    return (
        F.add(F.mul(a, e), F.mul(b, g)),
        F.add(F.mul(a, f_), F.mul(b, h)),
        F.add(F.mul(c, e), F.mul(d, g)),
        F.add(F.mul(c, f_), F.mul(d, h)),
    )


def mat_det(F: FiniteField, A):
    a, b, c, d = A
    return F.sub(F.mul(a, d), F.mul(b, c))


def mat_trace(F: FiniteField, A):
    return F.add(A[0], A[3])


def mat_inv(F: FiniteField, A):
    a, b, c, d = A
    det = mat_det(F, A)
    di = F.inv(det)
    return (F.mul(d, di), F.mul(F.neg(b), di), F.mul(F.neg(c), di), F.mul(a, di))


def mat_is_scalar(F: FiniteField, A) -> bool:
    return A[1] == F.zero and A[2] == F.zero and A[0] == A[3]


def mat_scale(F: FiniteField, A, s):
    return tuple(F.mul(s, x) for x in A)


def group_closure(F: FiniteField, gens, bound: int = 10 ** 6) -> list:
    """Subgroup generated by gens, as a list in BFS discovery order."""
    ident = mat_identity(F)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    gens = list(gens)
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                prod = mat_mul(F, h, g)
                if prod not in seen:
                    seen.add(prod)
                    order.append(prod)
                    nxt.append(prod)
                    if len(seen) > bound:
                        raise ClosureBoundExceeded(
                            f"closure exceeded bound {bound}")
        frontier = nxt
    return order


def element_order(F: FiniteField, A) -> int:
    ident = mat_identity(F)
    cur = A
    n = 1
    while cur != ident:
        cur = mat_mul(F, cur, A)
        n += 1
        if n > F.q ** 4:
            raise ArithmeticError("element order overran group bound")
    return n


# ---------------------------------------------------------------------------
# exceptional residue classes
# ---------------------------------------------------------------------------

def k_exceptional(n: int, p: int, f: int) -> tuple[bool, dict]:
    """Whether the odd integer n > 1 is exceptional for F_{p^f}.

    Returns (flag, witness).  The witness records the branch (which of
    p^f - 1 / p^f + 1 the integer divides) and the residue certificate.
    """
    if n <= 1 or n % 2 == 0:
        raise ValueError("n must be odd and > 1")
    q = p ** f
    if (q - 1) % n == 0:
        for i in range(f):
            r = pow(p, i, n)
            for eps in (1, -1):
                if r == (2 * eps) % n:
                    return True, {"branch": "divides q-1", "i": i, "eps": eps}
        return False, {"branch": "divides q-1"}
    if (q + 1) % n == 0:
        for i in range(2 * f):
            if pow(p, i, n) == 2 % n:
                return True, {"branch": "divides q+1", "i": i}
        return False, {"branch": "divides q+1"}
    return False, {"branch": "divides neither"}


def list_k_exceptional(p: int, f: int, bound: int) -> list[int]:
    out = []
    for n in range(3, bound + 1, 2):
        flag, _ = k_exceptional(n, p, f)
        if flag:
            out.append(n)
    return out


# ---------------------------------------------------------------------------
# Cartan subgroups and dihedral models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CartanSubgroup:
    """A split or nonsplit Cartan subgroup of GL2(F_q).

    Split: diagonal matrices.  Nonsplit: the image of F_{q^2}^* under
    a + b*alpha -> [[a, b*d], [b, a]] where alpha^2 = d, d a fixed nonsquare.
    """
    kind: str                 # "split" | "nonsplit"
    d: tuple | None = None    # nonsquare (nonsplit only)

    def elements(self, F: FiniteField) -> list:
        out = []
        if self.kind == "split":
            for a in F.elements():
                if a == F.zero:
                    continue
                for b in F.elements():
                    if b == F.zero:
                        continue
                    out.append((a, F.zero, F.zero, b))
        else:
            for a in F.elements():
                for b in F.elements():
                    if a == F.zero and b == F.zero:
                        continue
                    out.append(cartan_embed(F, self.d, a, b))
        return out


def smallest_nonsquare(F: FiniteField):
    for a in F.elements():
        if a == F.zero:
            continue
        if not F.is_square(a):
            return a
    raise ArithmeticError("no nonsquare found (q even?)")


def cartan_embed(F: FiniteField, d, a, b):
    """Matrix of multiplication by a + b*alpha on F_{q^2} = F_q(alpha), alpha^2 = d."""
    return (a, F.mul(b, d), b, a)


@dataclass(frozen=True)
class DihedralRep:
    """A dihedral (or cyclic) subgroup of GL2 with its defining data."""
    kind: str            # "split" | "nonsplit"
    n: int
    field: FiniteField
    rot: tuple           # image of the rotation generator
    invol: tuple | None  # image of the order-2 generator (None: cyclic part only)
    d: tuple | None      # nonsquare used (nonsplit only)

    def elements(self) -> list:
        F = self.field
        gens = [self.rot] if self.invol is None else [self.rot, self.invol]
        return group_closure(F, gens)


def make_I_psi(F: FiniteField, n: int, psi_image) -> DihedralRep:
    """Split dihedral model: rotation -> diag(t, t^-1), involution -> antidiag(1,1).

    psi_image = t must have exact multiplicative order n (the trivial
    character t = 1, n = 1 is allowed for decomposition experiments).
    """
    if psi_image == F.one:
        n_eff = 1
    else:
        n_eff = F.order(psi_image)
        if n_eff != n:
            raise OrderMismatch(f"psi image has order {n_eff}, expected {n}")
        if (F.q - 1) % n != 0:
            raise OrderMismatch("order must divide q - 1")
    rot = (psi_image, F.zero, F.zero, F.inv(psi_image) if psi_image != F.one else F.one)
    invol = (F.zero, F.one, F.one, F.zero)
    return DihedralRep("split", n_eff, F, rot, invol, None)


def make_J_psi_prime(F: FiniteField, n: int, norm_one: tuple[tuple, tuple],
                     d=None) -> DihedralRep:
    """Nonsplit dihedral model inside GL2(F_q) from a norm-one element of F_{q^2}.

    norm_one = (a, b) stands for a + b*alpha with alpha^2 = d (d a nonsquare,
    default the smallest one); a^2 - d b^2 must equal 1 and the element must
    have exact order n in the norm-one circle group.  The rotation maps to
    [[a, b*d],[b, a]] and the involution to diag(1, -1) (conjugation).
    """
    if d is None:
        d = smallest_nonsquare(F)
    a, b = norm_one
    norm = F.sub(F.mul(a, a), F.mul(d, F.mul(b, b)))
    if norm != F.one:
        raise ValueError("element does not have norm 1")
    rot = cartan_embed(F, d, a, b)
    o = element_order(F, rot)
    if o != n:
        raise OrderMismatch(f"norm-one element has order {o}, expected {n}")
    invol = (F.one, F.zero, F.zero, F.neg(F.one))
    return DihedralRep("nonsplit", n, F, rot, invol, d)


def norm_one_element_of_order(F: FiniteField, n: int, d=None):
    """First (a, b) in scan order with a^2 - d*b^2 = 1 of exact circle order n."""
    if d is None:
        d = smallest_nonsquare(F)
    if (F.q + 1) % n != 0:
        raise OrderMismatch("order must divide q + 1")
    for a in F.elements():
        for b in F.elements():
            if F.sub(F.mul(a, a), F.mul(d, F.mul(b, b))) == F.one:
                g = cartan_embed(F, d, a, b)
                if element_order(F, g) == n:
                    return (a, b)
    raise ArithmeticError("no norm-one element of requested order")


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class ClassifyReport:
    order: int
    irreducible: bool
    has_nontrivial_homothety: bool
    bucket: str                    # trivial_or_scalar | reducible | contains_sl2_subfield
    #                              # | cartan_normalizer | exceptional_a4_s4_a5
    det_image: list
    ph_order: int | None = None
    cartan_kind: str | None = None     # split | nonsplit (cartan_normalizer only)
    inside_cartan: bool | None = None
    cyclic_part_order: int | None = None
    exceptional_label: str | None = None
    stable_line: tuple | None = None   # a common eigenvector (reducible only)


def _proj_key(F: FiniteField, A):
    for x in A:
        if x != F.zero:
            xi = F.inv(x)
            return tuple(F.mul(xi, y) for y in A)
    raise ValueError("zero matrix")


def _lines(F: FiniteField):
    one, zero = F.one, F.zero
    yield (one, zero)
    for t in F.elements():
        yield (t, one)


def _fixes_line(F: FiniteField, A, line) -> bool:
    x, y = line
    a, b, c, d = A
    vx = F.add(F.mul(a, x), F.mul(b, y))
    vy = F.add(F.mul(c, x), F.mul(d, y))
    # (vx, vy) parallel to (x, y)
    return F.sub(F.mul(vx, y), F.mul(vy, x)) == F.zero


def common_eigenline(F: FiniteField, gens):
    for line in _lines(F):
        if all(_fixes_line(F, g, line) for g in gens):
            return line
    return None


def _charpoly_split_kind(F: FiniteField, A) -> str:
    """'split' if x^2 - tr x + det has two distinct roots in F, 'nonsplit' if
    irreducible, 'repeated' otherwise."""
    t = mat_trace(F, A)
    d = mat_det(F, A)
    # discriminant t^2 - 4 det
    four = F.from_int(4)
    disc = F.sub(F.mul(t, t), F.mul(four, d))
    if disc == F.zero:
        return "repeated"
    return "split" if F.is_square(disc) else "nonsplit"


def classify_subgroup(F: FiniteField, gens, bound: int = 10 ** 6) -> ClassifyReport:
    gens = list(gens)
    for g in gens:
        if mat_det(F, g) == F.zero:
            raise ValueError("generator is singular")
    elements = group_closure(F, gens, bound)
    order = len(elements)
    p = F.p

    homothety = any(mat_is_scalar(F, A) and A[0] != F.one for A in elements)
    all_scalar = all(mat_is_scalar(F, A) for A in elements)
    line = common_eigenline(F, gens)
    irreducible = line is None
    dets = sorted({mat_det(F, A) for A in elements})

    rep = ClassifyReport(order=order, irreducible=irreducible,
                         has_nontrivial_homothety=homothety,
                         bucket="", det_image=dets)
    if all_scalar:
        rep.bucket = "trivial_or_scalar"
        return rep
    if not irreducible:
        rep.bucket = "reducible"
        rep.stable_line = line
        return rep
    if order % p == 0:
        rep.bucket = "contains_sl2_subfield"
        return rep

    # p-prime order, irreducible: Cartan normalizer or projectively A4/S4/A5
    keys = {}
    for A in elements:
        keys.setdefault(_proj_key(F, A), A)
    ph_order = len(keys)
    rep.ph_order = ph_order

    def ph_elt_order(A):
        cur = A
        n = 1
        while not mat_is_scalar(F, cur):
            cur = mat_mul(F, cur, A)
            n += 1
        return n

    ph_orders = {k: ph_elt_order(A) for k, A in keys.items()}
    max_ord = max(ph_orders.values())

    cyclic = max_ord == ph_order
    dihedral = False
    rot = None
    if cyclic:
        rot = next(keys[k] for k in keys if ph_orders[k] == max_ord)
        cyc_order = ph_order
    elif ph_order % 2 == 0 and max_ord == ph_order // 2:
        # candidate rotation of index 2; check an inverting involution exists
        nhalf = ph_order // 2
        rot = next(keys[k] for k in keys if ph_orders[k] == nhalf)
        rot_pows = set()
        cur = rot
        for _ in range(nhalf):
            rot_pows.add(_proj_key(F, cur))
            cur = mat_mul(F, cur, rot)
        inv_rot = mat_inv(F, rot)
        for k, s in keys.items():
            if k in rot_pows:
                continue
            conj = mat_mul(F, mat_mul(F, s, rot), mat_inv(F, s))
            if _proj_key(F, conj) == _proj_key(F, inv_rot):
                dihedral = True
                break
        cyc_order = nhalf
    if cyclic or dihedral:
        rep.bucket = "cartan_normalizer"
        kind = _charpoly_split_kind(F, rot)
        if kind == "repeated":
            raise ClassificationError("non-semisimple rotation in p-prime subgroup")
        rep.cartan_kind = kind
        rep.cyclic_part_order = cyc_order
        abelian = all(mat_mul(F, a, b) == mat_mul(F, b, a)
                      for a in gens for b in gens)
        rep.inside_cartan = abelian
        return rep

    if ph_order in (12, 24, 60):
        rep.bucket = "exceptional_a4_s4_a5"
        rep.exceptional_label = {12: "A4", 24: "S4", 60: "A5"}[ph_order]
        return rep
    raise ClassificationError(
        f"irreducible p-prime subgroup with PH order {ph_order} fits no bucket")


def all_subgroups(F: FiniteField, elements: list) -> list[frozenset]:
    """Every subgroup of the group given by `elements` (desk scale only)."""
    ident = mat_identity(F)
    subs = {frozenset([ident])}
    frontier = [frozenset([ident])]
    while frontier:
        new = []
        for S in frontier:
            for g in elements:
                if g in S:
                    continue
                closed = frozenset(group_closure(F, list(S) + [g]))
                if closed not in subs:
                    subs.add(closed)
                    new.append(closed)
        frontier = new
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


def irreducible_no_homothety_classes(F: FiniteField) -> list[DihedralRep]:
    """All conjugacy classes of H <= GL2(F_q) irreducible with H ∩ Z(GL2) = 1.

    For odd q these are exactly (one class per odd n > 1):

    - cyclic C_n inside a nonsplit Cartan, n | q + 1 (the norm-one circle),
    - split dihedral I(n), n | q - 1,
    - nonsplit dihedral J(n), n | q + 1.

    Completeness: p cannot divide #H (a unipotent element fixes a unique
    line, and an irreducible subgroup of order divisible by p contains
    SL2, hence the homothety -1).  H cannot surject onto A4/S4/A5 in
    PGL2 without scalars: a Klein four-subgroup of GL2 made of commuting
    involutions forces the product of two non-scalar involutions to be
    the scalar -1.  So H lies in a Cartan normalizer N(T).  If H <= T,
    irreducibility forces the nonsplit case and H ∩ Z = 1 forces
    gcd(n, q - 1) = 1, i.e. odd n | q + 1.  Otherwise H ∩ T is
    swap-stable without scalars, which in the split case pins rotations
    to diag(t, 1/t) and reflections (no-homothety squares) to
    conjugates of antidiag(1, 1); in the nonsplit case reflections
    square to the norm, forcing norm-one data, and Hilbert-90-style
    conjugation inside N(T) fuses all reflection choices.  Homothety
    freeness of the rotation part is exactly n odd in both cases.
    """
    q = F.q
    out = []
    d = smallest_nonsquare(F)
    for n in range(3, q + 2, 2):
        if (q + 1) % n == 0:
            ab = norm_one_element_of_order(F, n, d)
            rot = cartan_embed(F, d, ab[0], ab[1])
            out.append(DihedralRep("nonsplit", n, F, rot, None, d))
            out.append(make_J_psi_prime(F, n, ab, d))
    for n in range(3, q, 2):
        if (q - 1) % n == 0:
            t = element_of_multiplicative_order(F, n)
            out.append(make_I_psi(F, n, t))
    return sorted(out, key=lambda r: (r.kind, r.n, r.invol is None))


def element_of_multiplicative_order(F: FiniteField, n: int):
    """First field element of exact multiplicative order n in scan order."""
    if (F.q - 1) % n != 0:
        raise OrderMismatch("order must divide q - 1")
    for a in F.elements():
        if a == F.zero:
            continue
        if F.order(a) == n:
            return a
    raise ArithmeticError("no element of requested order")
