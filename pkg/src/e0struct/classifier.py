"""Decide the Z_p-module structure of E_0(K) for additive reduction:
the unramified path through the g polynomial, the Q_p congruence
shortcuts, the 6e < p-1 fast path, and the exploratory ramified
computation via a truncated logarithm."""

from __future__ import annotations

from fractions import Fraction

from .curve import WeierstrassCurve, normalize_additive, Transform
from .formal_group import (GENERIC_A, eval_at, formal_log, g_polynomial,
                           specialize, specialized_mult_by_n)
from .local_field import LocalField
from .residue_field import additive_poly_roots, ff_norm, _fp_kernel


class InternalInconsistency(AssertionError):
    """A cross-check that must never fail did fail."""


class GroupStructure:
    """free_rank copies of Z_p plus p-power torsion orders."""

    __slots__ = ("p", "free_rank", "torsion")

    def __init__(self, p, free_rank, torsion=()):
        self.p = p
        self.free_rank = free_rank
        self.torsion = tuple(torsion)

    def __eq__(self, other):
        return (isinstance(other, GroupStructure)
                and (self.p, self.free_rank, self.torsion)
                == (other.p, other.free_rank, other.torsion))

    def __repr__(self):
        return f"GroupStructure({self})"

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append(f"Z_{self.p}")
        elif self.free_rank:
            parts.append(f"Z_{self.p}^{self.free_rank}")
        counts = {}
        for q in self.torsion:
            counts[q] = counts.get(q, 0) + 1
        for q, c in sorted(counts.items()):
            s = f"Z/{q}Z"
            parts.append(s if c == 1 else f"({s})^{c}")
        return " x ".join(parts) if parts else "0"

    @property
    def torsion_rank(self):
        return len(self.torsion)

    def to_json(self):
        return {"free_rank": self.free_rank,
                "torsion": list(self.torsion)}


class ClassificationReport:
    def __init__(self, structure, method, evidence, certified,
                 transform=None):
        self.structure = structure
        self.method = method
        self.evidence = evidence
        self.certified = certified
        self.transform = transform

    def __repr__(self):
        tag = "certified" if self.certified else "exploratory"
        return f"ClassificationReport({self.structure}, {self.method}, {tag})"

    def to_json(self):
        out = {"structure": self.structure.to_json(),
               "method": self.method,
               "evidence": self.evidence,
               "certified": self.certified}
        if self.transform is not None and not self.transform.is_identity:
            out["transform"] = self.transform.to_json()
        return out


def _require_normalized(E):
    if not E.is_normalized():
        raise ValueError("curve is not normalized (some a_i is a unit); "
                         "use classify_general for automatic normalization")


# closed-form table coefficients c with torsion iff N_{k/F_p}(c) = 1
_NORM_COEFF = {3: (8, 1), 5: (3, 3), 7: (4, 4)}  # p -> (factor, a-index)


def classify_unramified(E: WeierstrassCurve) -> ClassificationReport:
    f = E.field
    if f.kind != "unramified":
        raise ValueError("classify_unramified requires an unramified field")
    _require_normalized(E)
    p, n = f.p, f.deg
    g = g_polynomial(E)
    b, roots = additive_poly_roots(g)
    evidence = {"g": [list(c.coeffs) for c in g.coeffs],
                "kernel_dim": b}
    if p > 7:
        if b != 0 or len(g.coeffs) > 1:
            raise InternalInconsistency(f"p = {p} > 7 but g = {g} is not T")
        return ClassificationReport(GroupStructure(p, n), "theorem-p>7",
                                    evidence, certified=True)
    if p in _NORM_COEFF:
        factor, idx = _NORM_COEFF[p]
        c = (factor * E.a[idx]).shift_down(1).reduce()
        norm_is_one = bool(c) and ff_norm(c).as_int() == 1
        evidence["norm_criterion"] = norm_is_one
        if norm_is_one != (b == 1) or b > 1:
            raise InternalInconsistency(
                f"norm criterion ({norm_is_one}) disagrees with kernel "
                f"dimension {b} for p = {p}")
    else:  # p == 2: the kernel is the paper's quartic root count
        if b > 2 or (b == 2 and n < 2):
            raise InternalInconsistency(f"impossible 2-torsion rank {b}")
        evidence["quartic_roots"] = len(roots)
    return ClassificationReport(
        GroupStructure(p, n, [p] * b), "theorem-unramified", evidence,
        certified=True)


# Q_p congruences: p -> (a-index or "a1+a3", modulus, residue)
_CONGRUENCES = {2: ("a1+a3", 4, 2), 3: (1, 9, 6), 5: (3, 25, 10),
                7: (4, 49, 14)}


def classify_congruence(E: WeierstrassCurve) -> ClassificationReport:
    f = E.field
    if f.kind != "unramified" or f.deg != 1:
        raise ValueError("classify_congruence requires K = Q_p")
    _require_normalized(E)
    p = f.p
    if p not in _CONGRUENCES:
        return ClassificationReport(GroupStructure(p, 1), "corollary-p>7",
                                    {}, certified=True)
    which, mod, res = _CONGRUENCES[p]
    if which == "a1+a3":
        val = (E.a1 + E.a3).coeffs[0]
        name = "a1+a3"
    else:
        val = E.a[which].coeffs[0]
        name = f"a{(1, 2, 3, 4, 6)[which]}"
    fired = val % mod == res
    tag = {2: "i", 3: "ii", 5: "iii", 7: "iv"}[p]
    evidence = {"congruence": f"{name} = {val % mod} mod {mod}",
                "fired": fired}
    return ClassificationReport(
        GroupStructure(p, 1, [p] if fired else []),
        f"corollary-{tag}", evidence, certified=True)


def classify_general(E: WeierstrassCurve) -> ClassificationReport:
    f = E.field
    transform = None
    if not E.is_normalized():
        E, transform = normalize_additive(E)
    p, n, e = f.p, f.deg, f.e
    if 6 * e < p - 1:
        report = ClassificationReport(
            GroupStructure(p, n), "6e<p-1",
            {"e": e, "inequality": f"6*{e} < {p} - 1"}, certified=True)
    elif f.kind == "unramified" and n == 1:
        report = classify_congruence(E)
    elif f.kind == "unramified":
        report = classify_unramified(E)
    else:
        report = ramified_g_map(E)
    report.transform = transform
    return report


def filtration_base_index(field: LocalField) -> int:
    """Smallest i with E_i(K) ~ Z_p^n and p E_i = E_{i+e} guaranteed."""
    p, e = field.p, field.e
    if p == 2:
        return max(e, 1)
    return e // (p - 1) + 1


def splitting_torsion(mat, p, N):
    """Kernel of g: (Z/p)^f -> (Z/p^N)^a given column-wise as an integer
    matrix mod p^N.  Returns (kernel_dim, kernel_basis, image_columns).

    Well-definedness on a p-torsion domain forces every column into
    p^(N-1) * Z/p^N; that is validated, and the kernel is computed as an
    F_p linear system after dividing the columns by p^(N-1)."""
    if not mat or any(len(row) != len(mat[0]) for row in mat):
        raise ValueError("malformed matrix")
    a, f = len(mat), len(mat[0])
    q = p ** N
    scale = p ** (N - 1)
    reduced = []
    for row in mat:
        r = []
        for v in row:
            v %= q
            if v % scale:
                raise ValueError(
                    f"column entry {v} not killed by p in Z/p^{N}; "
                    "the map is not defined on a p-torsion domain")
            r.append((v // scale) % p)
        reduced.append(r)
    # square up for the F_p kernel routine
    size = max(a, f)
    square = [[reduced[i][j] if i < a and j < f else 0
               for j in range(size)] for i in range(size)]
    kernel = [v[:f] for v in _fp_kernel(square, p)
              if not any(v[f:])]
    kernel = [v for v in kernel if any(v)]
    dim = len(kernel)
    cols = [[mat[i][j] % q for i in range(a)] for j in range(f)]
    return dim, kernel, cols


def _hnf(rows):
    """Row-style Hermite normal form of an integer matrix (list of row
    vectors); returns the nonzero rows, lower-triangular, positive pivots."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out = []
    col = 0
    while col < ncols and rows:
        rows.sort(key=lambda r: (r[col] == 0, abs(r[col]) if r[col] else 0))
        if rows[0][col] == 0:
            col += 1
            continue
        while True:
            pivot = rows[0]
            done = True
            for r in rows[1:]:
                if r[col]:
                    k = r[col] // pivot[col]
                    for j in range(ncols):
                        r[j] -= k * pivot[j]
                    done = False
            rows.sort(key=lambda r: (r[col] == 0,
                                     abs(r[col]) if r[col] else 0))
            if done or all(r[col] == 0 for r in rows[1:]):
                break
        pivot = rows.pop(0)
        if pivot[col] < 0:
            pivot = [-v for v in pivot]
        for r in out:
            k = r[col] // pivot[col]
            if k:
                for j in range(ncols):
                    r[j] -= k * pivot[j]
        out.append(pivot)
        col += 1
    return out


def ramified_g_map(E: WeierstrassCurve) -> ClassificationReport:
    """Exploratory classification over a totally ramified K: compute the
    induced map g: k -> m_K/m_K^{1+e} through the truncated formal
    logarithm, split off the torsion, and (when torsion-free) report the
    lattice (1/p) * preimage(im g).  certified is always False."""
    f = E.field
    if f.kind != "eisenstein":
        raise ValueError("ramified_g_map requires an Eisenstein field")
    _require_normalized(E)
    p, e = f.p, f.e
    if not (p - 1 > e or (p == 2 and e <= 2)):
        raise ValueError(
            f"hypothesis-violated: p - 1 = {p - 1} <= e = {e}")
    target = 1 + e + 2 * e  # slack for log-coefficient denominators
    D = 6 * -(-target // e)  # tail bound e*ceil(D/6) >= target
    mp = specialized_mult_by_n(E.a, p, D)
    a_k = tuple(ai.as_k() for ai in E.a)
    lg = specialize(formal_log(GENERIC_A, D), a_k, f.one().as_k(),
                    embed=f.embed_rational)
    # H = k = F_p has the single generator 1; its image spans im(g)
    px = eval_at(mp, f.one(), target)
    y = lg.evaluate_univar(px.as_k(), f.one().as_k())
    coords = _m_mod_coords(y, f)
    # one column since the residue field is F_p; each basis line
    # pi^i Z_p / p pi^i Z_p of m/m^{1+e} is a copy of Z/p, so N = 1
    mat = [[c] for c in coords]
    dim, kernel, _cols = splitting_torsion(mat, p, 1)
    evidence = {"g_image_coords": coords,
                "basis": "pi^1..pi^{e-1}, p",
                "log_value": y.to_json(),
                "kernel_dim": dim}
    report = ClassificationReport(
        GroupStructure(p, f.deg, [p] * dim), "ramified-exploratory",
        evidence, certified=False)
    report.lattice = None
    if dim == 0:
        report.lattice = _ramified_lattice(coords, f)
        evidence["lattice_basis"] = [[str(x) for x in row]
                                     for row in report.lattice]
    return report


def _m_mod_coords(y, field):
    """Coordinates of y in m/m^{1+e} on the basis pi, ..., pi^{e-1}, p,
    each line a copy of F_p."""
    e, p = field.e, field.p
    yi = y.integral_part()
    v = yi.valuation_or_none()
    if v is not None and v < 1:
        raise InternalInconsistency("g-map value is not in m_K")
    coeffs = yi.coeffs
    coords = [coeffs[i] % p for i in range(1, e)]
    coords.append((coeffs[0] // p) % p)
    return coords


def _ramified_lattice(coords, field):
    """Basis of (1/p)*(preimage of im g) as rows of Fractions over the
    O_K-basis 1, pi, ..., pi^{e-1}."""
    e, p = field.e, field.p
    n = e
    # m^{1+e} = pi^{1+e} O_K = p * pi * O_K: rows p*pi^{i+1} reduced
    rows = []
    for i in range(n):
        vec = _pi_power_vector(i + 1, field)
        rows.append([p * v for v in vec])
    # lift of the image vector: coords on (pi..pi^{e-1}, p)
    lift = [0] * n
    for j, c in enumerate(coords[:-1]):
        lift[j + 1] += c
    lift[0] += p * coords[-1]
    rows.append(lift)
    basis = _hnf(rows)
    return [[Fraction(v, p) for v in row] for row in basis]


def _pi_power_vector(k, field):
    """pi^k written on the basis 1, pi, ..., pi^{e-1} (integer vector)."""
    e = field.e
    poly = field.poly  # ascending, monic: (c_0, ..., c_{e-1}, 1)
    vec = [0] * e
    if k < e:
        vec[k] = 1
        return vec
    # reduce X^k mod the Eisenstein polynomial
    cur = [0] * e
    cur[e - 1] = 1  # X^{e-1}
    power = e - 1
    while power < k:
        # multiply by X
        top = cur[e - 1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(e):
                cur[i] -= top * poly[i]
        power += 1
    return cur


def random_normalized_curve(field: LocalField, rng, span=6):
    """Test helper: a_i drawn from m_K/m_K^span, Delta != 0 at precision."""
    from .local_field import PrecisionExhausted
    while True:
        avals = []
        for _ in range(5):
            coeffs = [rng.randrange(field.p ** field.int_prec(span))
                      for _ in range(field.deg)]
            x = field.element(coeffs) * field.uniformizer
            avals.append(x)
        try:
            return WeierstrassCurve(field, *avals)
        except PrecisionExhausted:
            continue
