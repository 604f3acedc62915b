"""Acceptance criteria: one test per criterion, each printing a single
PASS/FAIL line with its runtime and asserting the stated budget."""
import os
import subprocess
import sys
import time

from conftest import rand_non_quis, rand_quis

from qchain.fields import F2, F3, F5, QQ
from qchain.forms import (
    FormParam,
    all_params,
    canonicalize_eq,
    check_form_axioms,
    orthogonal_sum_q,
    q_neg,
    rho,
)
from qchain.complexes import (
    check_gamma_identities,
    embed_degree0,
    hyp_complex,
    is_quis,
    is_quis_degreewise,
    module_complex,
)
from qchain.linalg import block_matrix, identity, neg, zeros
from qchain.oracles import witt_table
from qchain.rng import SplitMix64
from qchain.spaces import (
    gw0_class,
    h_mu,
    hyperbolic,
    isotropic_vector,
    rand_metabolic,
    rand_qspace,
    restrict,
    sublagrangian_reduce,
    witt_class,
)
from qchain.surgery import check_presentation, gw0_of_complex

QUAD = FormParam(1, "quadratic")
SYM = FormParam(1, "symmetric")
FIELDS = (F2, F3, F5, QQ)
REPO = os.path.join(os.path.dirname(__file__), os.pardir)


def report(num, name, ok, dt, budget):
    print("criterion %d (%s): %s (%.1fs < %ds)"
          % (num, name, "PASS" if ok else "FAIL", dt, budget))
    assert ok, "criterion %d failed" % num
    assert dt < budget, "criterion %d took %.1fs, budget %ds" % (num, dt, budget)


def test_criterion_01_axiom_suite():
    t0 = time.perf_counter()
    ok = True
    for param in all_params():
        for field in FIELDS:
            rep = check_form_axioms(param, field, trials=1000, seed=1)
            ok = ok and rep.passed and rep.trials == 1000
    report(1, "axiom suite, 1000 trials x 24 configs, dims <= 6",
           ok, time.perf_counter() - t0, 30)


def test_criterion_02_chain_identities():
    t0 = time.perf_counter()
    plan = ((QUAD, F2, 70), (FormParam(-1, "symmetric"), F3, 70),
            (FormParam(1, "even"), F5, 40), (FormParam(-1, "quadratic"), QQ, 20))
    total = 0
    ok = True
    for param, field, trials in plan:
        rep = check_gamma_identities(param, field, trials=trials, seed=2)
        ok = ok and rep.passed and rep.checks == 6 * trials
        total += rep.trials
    ok = ok and total == 200
    report(2, "six gamma identities + i# o gamma = p on 200 complexes",
           ok, time.perf_counter() - t0, 10)


def test_criterion_03_quis_oracle_agreement():
    t0 = time.perf_counter()
    rng = SplitMix64(3)
    checked = 0
    ok = True
    for field in FIELDS:
        for _ in range(63):
            f = rand_quis(rng, field)
            agree = is_quis(f) == is_quis_degreewise(f) == True
            ok = ok and agree
            checked += 1
        for _ in range(62):
            g = rand_non_quis(rng, field)
            agree = is_quis(g) == is_quis_degreewise(g) == False
            ok = ok and agree
            checked += 1
    ok = ok and checked == 500
    report(3, "cone vs degreewise quis oracle on 500 maps",
           ok, time.perf_counter() - t0, 30)


def test_criterion_04_roundtrip():
    t0 = time.perf_counter()
    rng = SplitMix64(4)
    ok = True
    for field in FIELDS:
        for flavor in ("quadratic", "even", "symmetric"):
            for t in range(200):
                param = FormParam(1 if t % 2 == 0 else -1, flavor)
                x = rand_qspace(rng, param, field, rng.randint(0, 4))
                ok = ok and gw0_of_complex(embed_degree0(param, x)) == gw0_class(x)
    report(4, "gw0_of_complex(embed_degree0) = gw0_class, 200 per field/flavor",
           ok, time.perf_counter() - t0, 30)


def test_criterion_05_presentation_relations():
    t0 = time.perf_counter()
    ok = True
    for param, field in ((QUAD, F2), (SYM, F3), (SYM, F5)):
        rep = check_presentation(param, field, trials=300, seed=5)
        ok = (ok and rep.passed
              and all(rep.trials[k] >= 300 for k in ("sum", "quis", "metabolic")))
    report(5, "presentation relations, 300 each over F2(quad)/F3/F5",
           ok, time.perf_counter() - t0, 120)


def test_criterion_06_shifted_hyperbolic():
    t0 = time.perf_counter()
    ok = True
    for param in all_params():
        for field in (F2, F3):
            h1 = gw0_class(hyperbolic(param, field, 1))
            for k in range(0, 4):
                for m in range(0, 4):
                    got = gw0_of_complex(
                        hyp_complex(param, module_complex(field, k, m)))
                    want = gw0_class(hyperbolic(param, field, 0))
                    for _ in range(k):
                        want = want.add(h1.neg() if m % 2 else h1)
                    ok = ok and got == want
    report(6, "H(R^k)[-m] reduces to (-1)^m k hyperbolic classes, k,m <= 3",
           ok, time.perf_counter() - t0, 10)


def test_criterion_07_witt_tables():
    t0 = time.perf_counter()
    f3 = witt_table(SYM, F3, max_rank=4, samples=300)
    f5 = witt_table(SYM, F5, max_rank=4, samples=300)
    f2 = witt_table(QUAD, F2, max_rank=4, samples=300)
    ok = (f3.passed and f3.group_order == 4
          and f3.unit_class is not None and f3.orders[f3.unit_class] == 4)
    ok = ok and f5.passed and f5.group_order == 4 and all(o <= 2 for o in f5.orders)
    ok = ok and f2.passed and f2.group_order == 2
    report(7, "W(F3)=Z/4 via <1>, W(F5)=(Z/2)^2, quadratic W(F2)=Z/2 by Arf",
           ok, time.perf_counter() - t0, 60)


def test_criterion_08_h_mu_identity():
    t0 = time.perf_counter()
    rng = SplitMix64(8)
    ok = True
    combos = [(p, f) for p in all_params() for f in FIELDS]
    for t in range(100):
        param, field = combos[t % len(combos)]
        mu = rand_qspace(rng, param, field, 1 + rng.randint(0, 2)).form
        n = mu.n
        x = h_mu(mu)
        g = block_matrix(field,
                         [[neg(field, identity(field, n)), identity(field, n)],
                          [rho(mu), zeros(field, n, n)]],
                         [n, n], [n, n])
        pulled = restrict(g, x.form, 2 * n)
        want = orthogonal_sum_q(q_neg(mu), mu)
        ok = ok and canonicalize_eq(pulled, want)
    report(8, "(-1 1; rho(mu) 0) pulls H^mu back to (-mu) + (mu), 100 mu",
           ok, time.perf_counter() - t0, 5)


def test_criterion_09_sublagrangian_witt():
    t0 = time.perf_counter()
    rng = SplitMix64(9)
    params = list(all_params())
    done = 0
    ok = True
    while done < 200:
        param = params[done % len(params)]
        field = (F2, F3, F5)[done % 3]
        if done % 2 == 0:
            x, lag = rand_metabolic(rng, param, field, 1 + rng.randint(0, 1))
            j = 1 + rng.randint(0, len(lag[0]) - 1)
            sub = [row[:j] for row in lag]
        else:
            x = rand_qspace(rng, param, field, 2 + rng.randint(0, 2))
            v = isotropic_vector(x)
            if v is None:
                continue
            sub = [[c] for c in v]
        ok = ok and witt_class(sublagrangian_reduce(x, sub)) == witt_class(x)
        done += 1
    report(9, "witt_class invariant under sublagrangian_reduce, 200 instances",
           ok, time.perf_counter() - t0, 30)


def test_criterion_10_cli_determinism():
    t0 = time.perf_counter()
    cmd = [sys.executable, "-m", "qchain.cli", "corpus-check",
           "--corpus", os.path.join(REPO, "corpus")]
    first = subprocess.run(cmd, capture_output=True, cwd=REPO)
    second = subprocess.run(cmd, capture_output=True, cwd=REPO)
    ok = (first.returncode == 0 and second.returncode == 0
          and first.stdout == second.stdout and first.stdout)
    report(10, "corpus-check byte-identical across two runs",
           bool(ok), time.perf_counter() - t0, 60)
