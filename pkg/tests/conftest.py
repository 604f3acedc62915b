"""Shared randomized generators: chain maps of known homotopy class,
built by perturbing canonical maps with null homotopies (f + d s + s d
is a chain map homotopic to f, so quasi-isomorphism status is preserved
while every component becomes generic)."""
from qchain.complexes import (
    ChainComplex,
    ChainMap,
    cone_obj,
    direct_sum,
    identity_map,
    is_acyclic,
    rand_complex,
    sum_inclusions,
    zero_map,
)
from qchain.fields import Field
from qchain.linalg import add, block_matrix, identity, mul, scalar_mul
from qchain.rng import SplitMix64, rand_mat


def perturb_homotopic(rng: SplitMix64, f: ChainMap) -> ChainMap:
    a, b = f.source, f.target
    field = a.field
    degs = sorted(set(a.degrees()) | set(b.degrees()))
    if not degs:
        return f
    s = {n: rand_mat(rng, field, b.dim(n + 1), a.dim(n))
         for n in range(degs[0] - 1, degs[-1] + 2)}
    comps = {}
    for n in degs:
        t1 = mul(field, b.d(n + 1), s[n], b.dim(n + 1), a.dim(n))
        t2 = mul(field, s[n - 1], a.d(n), a.dim(n - 1), a.dim(n))
        comps[n] = add(field, f.f(n), add(field, t1, t2))
    return ChainMap(a, b, comps)


def rand_quis(rng: SplitMix64, field: Field, lo: int = -2, hi: int = 2,
              max_dim: int = 2) -> ChainMap:
    """Quasi-isomorphism by construction: a unit multiple of the identity,
    or the inclusion into / projection from a sum with an acyclic complex,
    each blurred by a null homotopy."""
    e = rand_complex(rng, field, lo, hi, max_dim)
    kind = rng.randint(0, 2)
    if kind == 0:
        c = field.zero()
        while c == 0:
            c = rand_mat(rng, field, 1, 1)[0][0]
        base = ChainMap(e, e, {n: scalar_mul(field, c, identity(field, e.dim(n)))
                               for n in e.degrees()})
    else:
        acyclic = cone_obj(rand_complex(rng, field, lo, hi, max_dim))[0]
        if kind == 1:
            base, _ = sum_inclusions(e, acyclic)
        else:
            s = direct_sum(e, acyclic)
            comps = {n: block_matrix(field,
                                     [[identity(field, e.dim(n)), None]],
                                     [e.dim(n)], [e.dim(n), acyclic.dim(n)])
                     for n in s.degrees()}
            base = ChainMap(s, e, comps)
    return perturb_homotopic(rng, base)


def rand_non_quis(rng: SplitMix64, field: Field, lo: int = -2, hi: int = 2,
                  max_dim: int = 2, max_tries: int = 100) -> ChainMap:
    """Engineered failure: the zero endomorphism of, or the cone inclusion
    out of, a complex with nonzero homology; blurred as above."""
    for _ in range(max_tries):
        e = rand_complex(rng, field, lo, hi, max_dim)
        if is_acyclic(e):
            continue
        base = cone_obj(e)[1] if rng.randint(0, 1) else zero_map(e, e)
        return perturb_homotopic(rng, base)
    raise AssertionError("failed to sample a complex with homology")
