#!/usr/bin/env python3
"""Generates the randomized corpus instances with independently computed expectations.

Arithmetic is done here from scratch: monomial normal forms for triangular
presentations and dense Gaussian elimination mod p. Verdicts are only recorded
when they follow from the construction or from a dimension count:

* `pi` instances substitute u_i = x_i - g_i(x_<i), so x_i^(p^e_i) = g_i^(p^e_i)
  (or = x_j + g_i^(p^e_i)) and C is a tensor product of truncated polynomial
  rings; it is purely inseparable over k (and over k[x_1] when x_1 is free).
* `not_pi` instances either take A = k[a] with dim A not dividing dim C, or
  find a level B_e = A[C^(p^e)] over which C is not free (dim C != dim B_e *
  dim C / m_e C); both rule out an F-extension, hence pure inseparability.
"""

import itertools
import random
import sys
from pathlib import Path


class Algebra:
    def __init__(self, p, names, exps, rels):
        self.p = p
        self.names = names
        self.bounds = [p ** e for e in exps]
        self.rels = rels  # list of dict monomial -> coeff, in earlier variables
        self.monomials = list(itertools.product(*[range(b) for b in self.bounds]))
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self.dim = len(self.monomials)
        self._mul_cache = {}

    def normal(self, poly):
        """Reduce a dict monomial -> coeff to normal form."""
        out = {}
        todo = list(poly.items())
        while todo:
            m, c = todo.pop()
            c %= self.p
            if c == 0:
                continue
            bad = next((i for i in range(len(m) - 1, -1, -1) if m[i] >= self.bounds[i]), None)
            if bad is None:
                out[m] = (out.get(m, 0) + c) % self.p
                continue
            rest = list(m)
            rest[bad] -= self.bounds[bad]
            for rm, rc in self.rels[bad].items():
                nm = tuple(a + b for a, b in zip(rest, rm))
                todo.append((nm, c * rc))
        return {m: c for m, c in out.items() if c}

    def vec(self, poly):
        v = [0] * self.dim
        for m, c in self.normal(poly).items():
            v[self.index[m]] = c
        return v

    def poly(self, v):
        return {self.monomials[i]: c for i, c in enumerate(v) if c}

    def mul(self, a, b):
        prod = {}
        for m1, c1 in self.poly(a).items():
            for m2, c2 in self.poly(b).items():
                m = tuple(x + y for x, y in zip(m1, m2))
                prod[m] = (prod.get(m, 0) + c1 * c2) % self.p
        return self.vec(prod)

    def power(self, a, n):
        r = self.vec({tuple([0] * len(self.names)): 1})
        for _ in range(n):
            r = self.mul(r, a)
        return r

    def one(self):
        return self.vec({tuple([0] * len(self.names)): 1})


def rank(rows, p):
    rows = [list(r) for r in rows]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def span_basis(rows, p):
    """Row-reduced basis of the span."""
    rows = [list(r) for r in rows if any(r)]
    out = []
    for v in rows:
        if rank(out + [v], p) > len(out):
            out.append(v)
    return out


def subalgebra(alg, seeds):
    basis = span_basis([alg.one()] + seeds, alg.p)
    while True:
        prods = [alg.mul(a, b) for a in basis for b in basis]
        nb = span_basis(basis + prods, alg.p)
        if len(nb) == len(basis):
            return basis
        basis = nb


def ideal_times(alg, ideal_gens):
    """Span of m * C for m running over the given elements."""
    mons = [alg.vec({m: 1}) for m in alg.monomials]
    return span_basis([alg.mul(g, c) for g in ideal_gens for c in mons], alg.p)


def chain(alg, a_gens):
    """Dimensions of A[C^(p^e)] until they reach A, and the freeness of C over each level."""
    mons = [alg.vec({m: 1}) for m in alg.monomials]
    dims, free = [], []
    e = 0
    while True:
        seeds = a_gens + [alg.power(m, alg.p ** e) for m in mons]
        b = subalgebra(alg, seeds)
        # maximal ideal of the local algebra b: elements with zero constant term
        m_b = [v for v in span_basis([[x for x in v] for v in b], alg.p)]
        const = alg.index[tuple([0] * len(alg.names))]
        m_b = reduce_to_max_ideal(b, const, alg.p)
        fiber = alg.dim - len(ideal_times(alg, m_b))
        dims.append(len(b))
        free.append(len(b) * fiber == alg.dim)
        if len(dims) >= 2 and dims[-1] == dims[-2]:
            dims.pop()
            free.pop()
            return dims, free
        e += 1


def reduce_to_max_ideal(basis, const, p):
    out = []
    one_like = next(v for v in basis if v[const])
    inv = pow(one_like[const], p - 2, p)
    for v in basis:
        if v is one_like:
            continue
        f = v[const] * inv % p
        out.append([(x - f * y) % p for x, y in zip(v, one_like)])
    return out


def fmt_poly(names, poly):
    terms = []
    for m, c in sorted(poly.items()):
        factors = [] if c == 1 else [str(c)]
        for n, a in zip(names, m):
            if a == 1:
                factors.append(n)
            elif a > 1:
                factors.append(f"{n}^{a}")
        terms.append("*".join(factors) if factors else str(c))
    return " + ".join(terms) if terms else "0"


def random_lower(rng, p, i, nvars, bounds, terms=2):
    """A random polynomial without constant term in the first i variables."""
    poly = {}
    if i == 0:
        return poly
    for _ in range(rng.randint(1, terms)):
        m = [0] * nvars
        for j in range(i):
            m[j] = rng.randrange(bounds[j])
        if any(m):
            poly[tuple(m)] = rng.randrange(1, p)
    return poly


def frob(poly, q):
    return {tuple(a * q for a in m): c for m, c in poly.items()}


def pi_instance(rng, p, exps, link):
    """Tensor product of truncated lines in disguise; `link[i] = j` glues u_i^(p^e_i) = x_j."""
    n = len(exps)
    names = [f"x{i + 1}" for i in range(n)]
    bounds = [p ** e for e in exps]
    rels = []
    alg = Algebra(p, names, exps, [{} for _ in range(n)])
    for i in range(n):
        g = random_lower(rng, p, i, n, bounds)
        rhs = frob(g, bounds[i])
        if link.get(i) is not None:
            m = [0] * n
            m[link[i]] = 1
            rhs[tuple(m)] = (rhs.get(tuple(m), 0) + 1) % p
        alg.rels = rels + [rhs] + [{} for _ in range(n - i - 1)]
        rels.append(alg.normal(rhs))
    alg = Algebra(p, names, exps, rels)
    # factor exponents: a linked variable absorbs the one it is glued to
    glued = set(link.values())
    factors = []
    for i in range(n):
        if i in glued:
            continue
        e, j = exps[i], link.get(i)
        while j is not None:
            e += exps[j]
            j = link.get(j)
        factors.append(e)
    return alg, sorted(factors, reverse=True)


def document(name, alg, comment, subrings, expect):
    lines = [f"# {comment}", f"p = {alg.p}", "[algebra]", "generators = " + ", ".join(alg.names)]
    for i, n in enumerate(alg.names):
        lines.append(f"{n}^{alg.bounds[i]} = {fmt_poly(alg.names, alg.rels[i])}")
    for sname, exprs in subrings:
        lines.append(f"[subring {sname}]")
        lines.extend(exprs)
    for leg, values in expect:
        lines.append("[expect]" if leg is None else f"[expect {leg}]")
        for k, v in values:
            lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


def show(xs):
    return ", ".join(str(x) for x in xs)


def trivial_expect(p, factors, base_factor=None):
    exponent = max(factors) if factors else 0
    dims = [p ** sum(max(f - e, 0) for f in factors) for e in range(exponent + 1)]
    if base_factor is not None:
        dims = [d * p ** base_factor for d in dims]
    values = [
        ("exponent", exponent),
        ("chain", show(dims)),
        ("f_extension", "true"),
        ("purely_inseparable", "true"),
        ("theorem_a", "true"),
    ]
    if exponent <= 1:
        values.append(("galois", "true"))
    if base_factor is None:
        values.append(("gngs_n", show([sum(1 for f in factors if f > e) for e in range(exponent + 1)])))
        values.append(("gngs_e", show(factors)))
    return values


def main():
    rng = random.Random(20240611)
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent)
    docs = []

    pi_shapes = [
        (2, [1, 1], {}),
        (2, [2, 1], {}),
        (2, [1, 1, 1], {}),
        (2, [1, 2], {1: 0}),
        (2, [2, 2], {}),
        (2, [1, 1, 2], {2: 1}),
        (3, [1, 1], {}),
        (3, [1, 2], {1: 0}),
        (3, [1, 1, 1], {2: 0}),
        (5, [1, 1], {}),
    ]
    for idx, (p, exps, link) in enumerate(pi_shapes):
        alg, factors = pi_instance(rng, p, exps, link)
        assert alg.dim <= 30
        expect = [(None, trivial_expect(p, factors))]
        subrings = []
        if idx % 3 == 0 and 0 not in link.values() and 0 not in link:
            # A = k[x1] is a tensor factor
            rest = [f for f in factors]
            rest.remove(exps[0])
            subrings.append(("A1", ["x1"]))
            expect.append(("A1:C", trivial_expect(p, rest, base_factor=exps[0])))
        docs.append((f"random_pi_{idx + 1:02}", document(
            f"random_pi_{idx + 1:02}", alg,
            f"randomized: purely inseparable by a triangular change of variables, factors {show(factors)}",
            subrings, expect)))

    count = 0
    tries = 0
    while count < 5:
        tries += 1
        p = rng.choice([2, 2, 3])
        exps = rng.choice([[1, 1, 1], [2, 1], [1, 1, 1, 1], [2, 2]] if p == 2 else [[1, 1, 1], [2, 1]])
        n = len(exps)
        bounds = [p ** e for e in exps]
        rels = [random_lower(rng, p, i, n, bounds, terms=1) for i in range(n)]
        alg = Algebra(p, [f"x{i + 1}" for i in range(n)], exps, [{} for _ in range(n)])
        normal = []
        for i in range(n):
            alg.rels = normal + [rels[i]] + [{} for _ in range(n - i - 1)]
            normal.append(alg.normal(rels[i]))
        alg = Algebra(p, alg.names, exps, normal)
        if alg.dim > 30:
            continue
        dims, free = chain(alg, [])
        if all(free):
            continue
        level = free.index(False)
        docs.append((f"random_not_pi_{count + 1:02}", document(
            "", alg,
            f"randomized: C is not free over A[C^(p^{level})], so not an F-extension",
            [],
            [(None, [
                ("exponent", len(dims) - 1),
                ("chain", show(dims)),
                ("f_extension", "false"),
                ("purely_inseparable", "false"),
                ("theorem_a", "false"),
            ])])))
        count += 1

    count = 0
    while count < 4:
        p = rng.choice([2, 3])
        exps = rng.choice([[3], [2, 1], [1, 1, 1]] if p == 2 else [[2], [1, 1], [3]])
        alg, factors = pi_instance(rng, p, exps, {})
        if alg.dim > 30:
            continue
        n = len(exps)
        bounds = [p ** e for e in exps]
        a = random_lower(rng, p, n, n, bounds, terms=2)
        if not a:
            continue
        a_vec = alg.vec(a)
        base = subalgebra(alg, [a_vec])
        d = len(base)
        if alg.dim % d == 0:
            continue
        docs.append((f"random_not_pi_{count + 6:02}", document(
            "", alg,
            f"randomized: dim k[a] = {d} does not divide dim C = {alg.dim}",
            [("A", [fmt_poly(alg.names, a)])],
            [(None, [
                ("f_extension", "false"),
                ("purely_inseparable", "false"),
                ("theorem_a", "false"),
            ])])))
        count += 1

    for name, text in docs:
        (out / f"{name}.pinsep").write_text(text)
        print(name)


if __name__ == "__main__":
    main()
