"""Exact arithmetic in finite fields F_{p^n}.

Provides the norm map down to the prime field and kernel computation for
additive polynomials (polynomials supported on p-power exponents only),
which induce F_p-linear endomorphisms of the field.
"""

from __future__ import annotations

import itertools

# Fields up to this order allow exhaustive root search; larger fields fall
# back to the linear-algebra path only.
EXHAUSTIVE_BOUND = 2 ** 20


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


# -- dense polynomials over F_p, coefficient lists low-to-high --------------

def _poly_trim(a):
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_mod(a, f, p):
    a = list(a)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _poly_trim([c % p for c in a[:df]])


def _poly_mulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _poly_mod(out, f, p)


def _poly_powmod(a, k, f, p):
    result = [1]
    base = _poly_mod(a, f, p)
    while k:
        if k & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        k >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _poly_trim([c % p for c in a]), _poly_trim([c % p for c in b])
    while b:
        inv = pow(b[-1], -1, p)
        r = list(a)
        while len(r) >= len(b):
            if not (r := _poly_trim(r)):
                break
            if len(r) < len(b):
                break
            c = (r[-1] * inv) % p
            shift = len(r) - len(b)
            for j in range(len(b)):
                r[shift + j] = (r[shift + j] - c * b[j]) % p
            r = _poly_trim(r)
        a, b = b, _poly_trim(r)
    return a


def _is_irreducible(modulus, p):
    """Check irreducibility of a monic polynomial over F_p.

    Uses gcd(X^{p^i} - X, f) = 1 for 1 <= i <= deg/2, which rules out
    irreducible factors of any degree up to deg/2.
    """
    n = len(modulus) - 1
    if n == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(n // 2):
        xp = _poly_powmod(xp, p, modulus, p)
        diff = [(a - b) % p for a, b in itertools.zip_longest(xp, x, fillvalue=0)]
        g = _poly_gcd(modulus, diff, p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, n: int):
    """Lexicographically smallest monic irreducible of degree n over F_p.

    Candidates are ordered by their coefficient vector read as a base-p
    integer, which is deterministic and reproducible across runs.
    """
    if n == 1:
        return (0, 1)
    for code in range(p ** n):
        coeffs = []
        c = code
        for _ in range(n):
            coeffs.append(c % p)
            c //= p
        candidate = coeffs + [1]
        if candidate[0] == 0:
            continue
        if _is_irreducible(candidate, p):
            return tuple(candidate)
    raise RuntimeError(f"no irreducible polynomial of degree {n} over F_{p}")


class FiniteField:
    """The field F_{p^n} presented as F_p[X]/(modulus)."""

    def __init__(self, p: int, n: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = smallest_irreducible(p, n)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        if not _is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.n = n
        self.modulus = modulus
        self.order = p ** n

    def __eq__(self, other):
        return (isinstance(other, FiniteField)
                and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus))

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        return f"FiniteField(p={self.p}, n={self.n})"

    def element(self, coeffs) -> "FFElement":
        if isinstance(coeffs, FFElement):
            if coeffs.parent != self:
                raise ValueError("element from a different field")
            return coeffs
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        coeffs = list(coeffs)[: self.n]
        coeffs += [0] * (self.n - len(coeffs))
        return FFElement(self, tuple(c % self.p for c in coeffs))

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    @property
    def gen(self):
        """Class of X; a root of the modulus (not 1 unless n == 1)."""
        return self.element([0, 1])

    def prime_field(self) -> "FiniteField":
        return self if self.n == 1 else FiniteField(self.p, 1)

    def __iter__(self):
        for tup in itertools.product(range(self.p), repeat=self.n):
            yield FFElement(self, tup)

    def extension_squared(self) -> "FiniteField":
        """F_{p^{2n}}, used for tangent-direction counting over k-bar."""
        return FiniteField(self.p, 2 * self.n)

    def embed_into(self, big: "FiniteField", a: "FFElement") -> "FFElement":
        """Embed a in F_{p^{2n}} by mapping gen to a root of our modulus there."""
        root = self._modulus_root_in(big)
        acc = big.zero
        for c in reversed(a.coeffs):
            acc = acc * root + big.element(c)
        return acc

    def _modulus_root_in(self, big):
        key = (big.p, big.n, big.modulus)
        cache = getattr(self, "_root_cache", None)
        if cache is None:
            cache = self._root_cache = {}
        if key not in cache:
            for cand in big:
                acc = big.zero
                for c in reversed(self.modulus):
                    acc = acc * cand + big.element(c)
                if not acc:
                    cache[key] = cand
                    break
            else:
                raise ValueError("modulus has no root in the target field")
        return cache[key]


class FFElement:
    """Element of F_{p^n}, stored as a length-n coefficient vector."""

    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: FiniteField, coeffs):
        self.parent = parent
        self.coeffs = tuple(coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.parent.element(other)
        return (isinstance(other, FFElement)
                and self.parent == other.parent and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.parent.p, self.parent.modulus, self.coeffs))

    def __repr__(self):
        return f"FF{list(self.coeffs)}"

    def _coerce(self, other):
        if isinstance(other, int):
            return self.parent.element(other)
        if isinstance(other, FFElement) and other.parent == self.parent:
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.parent.p
        return FFElement(self.parent, ((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.parent.p
        return FFElement(self.parent, ((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        k = self.parent
        prod = _poly_mulmod(list(self.coeffs), list(o.coeffs), list(k.modulus), k.p)
        prod = list(prod) + [0] * (k.n - len(prod))
        return FFElement(k, prod)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.parent.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self ** (self.parent.order - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def is_in_prime_field(self):
        return not any(self.coeffs[1:])

    def as_int(self) -> int:
        """Value as an integer in [0, p) for prime-field elements."""
        if not self.is_in_prime_field():
            raise ValueError("element is not in the prime field")
        return self.coeffs[0]


def frobenius(a: FFElement) -> FFElement:
    """The p-power Frobenius x -> x^p."""
    return a ** a.parent.p


def ff_norm(a: FFElement) -> FFElement:
    """Norm from F_{p^n} down to F_p: the product of all Frobenius
    conjugates, equal to a^((p^n - 1)/(p - 1)).  Norm of 0 is 0."""
    k = a.parent
    if not a:
        return k.prime_field().zero
    exp = (k.order - 1) // (k.p - 1)
    val = a ** exp
    return k.prime_field().element(val.as_int())


class AdditivePoly:
    """An additive polynomial sum_j c_j X^{p^j} over F_{p^n}.

    Induces an F_p-linear endomorphism of the field; only p-power
    exponents occur.
    """

    def __init__(self, parent: FiniteField, coeffs):
        self.parent = parent
        self.coeffs = tuple(parent.element(c) for c in coeffs)

    def __repr__(self):
        return f"AdditivePoly({list(self.coeffs)})"

    def __call__(self, x: FFElement) -> FFElement:
        k = self.parent
        acc = k.zero
        xq = x
        for c in self.coeffs:
            acc = acc + c * xq
            xq = xq ** k.p
        return acc

    def matrix(self):
        """Matrix over F_p of the induced linear map on the basis 1, X, ...,
        X^{n-1}; column j is the image of the j-th basis vector."""
        k = self.parent
        cols = []
        for j in range(k.n):
            basis = k.element([0] * j + [1])
            cols.append(self(basis).coeffs)
        # rows indexed by coordinate, columns by basis vector
        return [[cols[j][i] for j in range(k.n)] for i in range(k.n)]


def _fp_kernel(mat, p):
    """Kernel basis of an n x n matrix over F_p by Gaussian elimination."""
    n = len(mat)
    m = [row[:] for row in mat]
    pivots = {}
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, n):
            if m[r][col] % p:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = pow(m[row][col], -1, p)
        m[row] = [(c * inv) % p for c in m[row]]
        for r in range(n):
            if r != row and m[r][col] % p:
                f = m[r][col]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[row])]
        pivots[col] = row
        row += 1
    free_cols = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free_cols:
        vec = [0] * n
        vec[fc] = 1
        for col, r in pivots.items():
            vec[col] = (-m[r][fc]) % p
        basis.append(vec)
    return basis


def additive_poly_roots(f: AdditivePoly, exhaustive_bound: int = EXHAUSTIVE_BOUND):
    """Kernel of the F_p-linear map induced by f.

    Returns (kernel_dimension, roots).  Computed by linear algebra on the
    matrix of f; for fields within the exhaustive bound the kernel is also
    recomputed by evaluating f everywhere, and the two answers must agree.
    """
    k = f.parent
    p = k.p
    basis = _fp_kernel(f.matrix(), p)
    dim = len(basis)
    roots = []
    for combo in itertools.product(range(p), repeat=dim):
        vec = [0] * k.n
        for c, b in zip(combo, basis):
            for i in range(k.n):
                vec[i] = (vec[i] + c * b[i]) % p
        roots.append(k.element(vec))
    if k.order <= exhaustive_bound:
        brute = [x for x in k if not f(x)]
        if sorted(r.coeffs for r in roots) != sorted(r.coeffs for r in brute):
            raise AssertionError(
                "linear-algebra and exhaustive kernels of an additive polynomial disagree")
    if len(roots) != p ** dim:
        raise AssertionError("kernel size is not p^dimension")
    return dim, roots
