"""Polynomial invariants read off (strict) supersolvability chains."""
from __future__ import annotations

from math import comb
from typing import Sequence

from .poset import FinitePoset
from .polynomial import IntPolynomial, product_of_roots
from .ssolv import IdealChain


class HypothesisError(ValueError):
    """An input does not satisfy the hypothesis a formula depends on."""


def charpoly_factored(chain: IdealChain, p: FinitePoset | None = None
                      ) -> tuple[IntPolynomial, list[IntPolynomial]]:
    """prod (t - a_i) for a strict chain, checked against the Möbius polynomial of ``p`` if given."""
    if not chain.strict:
        raise HypothesisError("factorization is only available for a strict (TM) chain")
    factors = [IntPolynomial.linear_root(a) for a in chain.a]
    prod = product_of_roots(chain.a)
    if p is not None:
        chi = p.char_poly()
        if chi != prod:
            raise AssertionError(f"characteristic polynomial {chi} differs from {prod}")
    return prod, factors


def _substitute(chi: IntPolynomial, d: int, v: int, n: int) -> IntPolynomial:
    """(-t^k)^n chi(-(1+t)^d / t^k) with k = d + v - 1, expanded without fractions."""
    k = d + v - 1
    one_plus_t = IntPolynomial([1, 1]) ** d
    out = IntPolynomial()
    # (-t^k)^n * c_j * (-(1+t)^d)^j / t^{kj} = (-1)^{n+j} c_j (1+t)^{dj} t^{k(n-j)}
    for j in range(chi.degree + 1):
        c = chi[j]
        if not c:
            continue
        if j > n:
            raise HypothesisError("characteristic polynomial degree exceeds the rank")
        sign = -1 if (n + j) % 2 else 1
        out = out + (one_plus_t ** j) * IntPolynomial.monomial(k * (n - j), sign * c)
    return out


def poincare(a: Sequence[int], d: int, v: int, chi: IntPolynomial | None = None) -> IntPolynomial:
    """prod ((1+t)^d + a_i t^{d+v-1}); when ``chi`` is given, the substitution form must agree."""
    if v <= 0:
        raise HypothesisError("Poincaré polynomial formula needs v > 0")
    if d < 0 or any(x < 0 for x in a):
        raise HypothesisError("d and the a_i must be nonnegative")
    k = d + v - 1
    base = IntPolynomial([1, 1]) ** d
    out = IntPolynomial([1])
    for ai in a:
        out = out * (base + IntPolynomial.monomial(k, ai))
    if chi is not None:
        other = _substitute(chi, d, v, len(a))
        if other != out:
            raise AssertionError(f"product form {out} and substitution form {other} disagree")
    return out


def _divisors(k: int) -> list[int]:
    return [j for j in range(1, k + 1) if k % j == 0]


def lcs_ranks(a: Sequence[int], jmax: int) -> list[int]:
    """phi_1..phi_jmax with prod_j (1 - t^j)^{phi_j} = prod_i (1 - (a_i + 1) t).

    Taking logarithmic derivatives turns this into
    sum_{j | k} j phi_j = sum_i (a_i + 1)^k, which is solved for k = 1..jmax.
    """
    if jmax < 1:
        raise ValueError("jmax must be at least 1")
    if any(x < 0 for x in a):
        raise HypothesisError("the a_i must be nonnegative")
    phi: list[int] = []
    for k in range(1, jmax + 1):
        power_sum = sum((x + 1) ** k for x in a)
        rest = power_sum - sum(j * phi[j - 1] for j in _divisors(k) if j < k)
        if rest % k or rest < 0:
            raise HypothesisError(f"no nonnegative integer solution at j = {k}")
        phi.append(rest // k)
    _check_lcs(a, phi)
    return phi


def _check_lcs(a: Sequence[int], phi: Sequence[int]) -> None:
    m = len(phi)

    def trunc(p: IntPolynomial) -> IntPolynomial:
        return IntPolynomial(p.coeffs[:m + 1])

    lhs = IntPolynomial([1])
    for j, e in enumerate(phi, start=1):
        # (1 - t^j)^e truncated, by the binomial theorem
        f = [0] * (m + 1)
        for k in range(m // j + 1):
            f[j * k] = (-1) ** k * comb(e, k)
        lhs = trunc(lhs * IntPolynomial(f))
    rhs = IntPolynomial([1])
    for x in a:
        rhs = trunc(rhs * IntPolynomial([1, -(x + 1)]))
    if lhs != rhs:
        raise AssertionError("lower central series ranks fail the generating identity")

