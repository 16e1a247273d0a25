import itertools
import random

import pytest

from e0struct.residue_field import (AdditivePoly, FiniteField,
                                    additive_poly_roots, ff_norm, frobenius)


def test_prime_field_arithmetic():
    # [TRIVIAL] F_7 is Z/7
    k = FiniteField(7, 1)
    a, b = k.element(3), k.element(5)
    assert (a + b).as_int() == 1
    assert (a * b).as_int() == 1
    assert (a - b).as_int() == 5
    assert (a.inverse() * a).as_int() == 1


def test_f4_structure():
    # [DERIVED] F_4 = F_2[w]/(w^2 + w + 1): w^2 = w + 1, w^3 = 1
    k = FiniteField(2, 2)
    w = k.gen
    assert w * w == w + k.one
    assert w ** 3 == k.one
    assert len(list(k)) == 4


def test_frobenius_is_additive_and_fixes_prime_field():
    # [TRIVIAL] x -> x^p is a field automorphism fixing F_p
    k = FiniteField(3, 2)
    rng = random.Random(1)
    elems = list(k)
    for _ in range(20):
        a, b = rng.choice(elems), rng.choice(elems)
        assert frobenius(a + b) == frobenius(a) + frobenius(b)
        assert frobenius(a * b) == frobenius(a) * frobenius(b)
    for c in range(3):
        assert frobenius(k.element(c)) == k.element(c)


def test_norm_is_product_of_conjugates():
    # [DERIVED] N(a) = a * a^p * ... * a^{p^{n-1}}, multiplicative,
    # lands in F_p
    k = FiniteField(5, 2)
    for a in k:
        conj = a
        prod = a
        for _ in range(k.n - 1):
            conj = frobenius(conj)
            prod = prod * conj
        n = ff_norm(a)
        assert prod.is_in_prime_field()
        assert n.as_int() == prod.as_int()


def test_norm_surjective_on_units():
    # [DERIVED] the norm maps k* onto F_p*; each fiber has size
    # (p^n - 1)/(p - 1)
    k = FiniteField(3, 2)
    counts = {}
    for a in k:
        if a:
            counts[ff_norm(a).as_int()] = counts.get(ff_norm(a).as_int(),
                                                     0) + 1
    assert counts == {1: 4, 2: 4}


def test_additive_poly_x4_minus_x_over_f4():
    # [PAPER] X^4 - X over F_4 has kernel dimension 2 (all of F_4)
    k = FiniteField(2, 2)
    # T - T^4 as coefficients on T^{p^j}: (1, 0, -1) = (1, 0, 1) mod 2
    f = AdditivePoly(k, [k.one, k.zero, k.one])
    dim, roots = additive_poly_roots(f)
    assert dim == 2
    assert len(roots) == 4


def test_additive_poly_artin_schreier():
    # [DERIVED] T - T^p over F_{p^n} has kernel exactly F_p
    for p, n in ((3, 1), (3, 2), (5, 2)):
        k = FiniteField(p, n)
        f = AdditivePoly(k, [k.one, k.element(p - 1)])
        dim, roots = additive_poly_roots(f)
        assert dim == 1
        assert sorted(r.coeffs for r in roots) == sorted(
            k.element(c).coeffs for c in range(p))


def test_additive_poly_linearity():
    # [TRIVIAL] additive polynomials induce F_p-linear maps
    k = FiniteField(2, 3)
    rng = random.Random(7)
    elems = list(k)
    f = AdditivePoly(k, [rng.choice(elems) for _ in range(3)])
    for a, b in itertools.product(elems[:4], elems[:4]):
        assert f(a + b) == f(a) + f(b)


def test_extension_squared_embedding():
    # [TRIVIAL] the embedding into the squared extension is a ring hom
    k = FiniteField(3, 2)
    k2 = k.extension_squared()

    def emb(x):
        return k.embed_into(k2, x)

    for a in list(k)[:5]:
        for b in list(k)[:5]:
            assert emb(a * b) == emb(a) * emb(b)
            assert emb(a + b) == emb(a) + emb(b)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        FiniteField(6, 1)
