"""Command line front end: parse and serialize instances, run the axiom
and relation suites, compute invariants and reductions, and emit reports.

Report conventions
  stdout is tab separated; lines starting with '#' are column headers.
  Randomized subcommands take an explicit --seed (the generator is
  SplitMix64), so every report is reproducible bit for bit.

Exit codes
  0  all checks pass
  1  a mathematical check failed; the failing instance is in the report
  2  usage or I/O error (including syntax errors in input files)
  Validation failures of otherwise well-formed documents count as
  mathematical failures: the named invariant is the counterexample.

Concurrency
  QCHAIN_THREADS=n runs independent (field, parameter) configurations
  on a thread pool; results are printed in canonical order, so reports
  do not depend on the thread count.

Figures
  Subcommands with --out DIR write the delimited report into DIR and
  render matplotlib figures (PNG) next to it.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

from .fields import F2, F3, F5, QQ, Field, field_by_name
from .forms import FormParam, all_params, check_form_axioms
from .complexes import check_gamma_identities, homology_ranks
from .spaces import QSpace, gw0_class, invariants, witt_class
from .surgery import SurgeryError, eval_ledger, gw0_of_complex, reduce_full
from .functors import s2_class
from .oracles import witt_table
from .serialize import (
    Document,
    DocumentError,
    ParseError,
    evaluate_expectations,
    load,
    parse,
    serialize,
)

_FIELD_ORDER = (F2, F3, F5, QQ)


class UsageError(Exception):
    """Bad arguments or unreadable/unparseable input; exit code 2."""
    code = 2


class CheckFailure(Exception):
    """A mathematical check failed; exit code 1."""
    code = 1


def _eps_str(eps: int) -> str:
    return "+1" if eps == 1 else "-1"


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("QCHAIN_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn: Callable, jobs: Sequence) -> List:
    """Map over independent jobs, optionally on a thread pool; results
    come back in job order regardless of scheduling."""
    workers = min(_thread_count(), len(jobs))
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


def _emit(lines: List[str], out_dir: Optional[str], name: str) -> None:
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, name), "w") as fh:
            fh.write(text)


def _load_doc(path: str) -> Document:
    try:
        return load(path)
    except OSError as e:
        raise UsageError(str(e))
    except ParseError as e:
        raise UsageError("%s: %s" % (path, e))
    except DocumentError as e:
        raise CheckFailure("%s: %s" % (path, e))


def _select_configs(field: Optional[str], flavor: Optional[str],
                    eps: Optional[int]) -> List[Tuple[Field, FormParam]]:
    if field is None:
        fields = list(_FIELD_ORDER)
    else:
        try:
            fields = [field_by_name(field)]
        except (ValueError, AssertionError):
            raise UsageError("unknown field %r" % field)
    params = [p for p in all_params()
              if (flavor is None or p.flavor == flavor)
              and (eps is None or p.epsilon == eps)]
    if not params:
        raise UsageError("no form parameter has flavor=%r eps=%r"
                         % (flavor, eps))
    return [(f, p) for f in fields for p in params]


def _dims_str(pairs: Sequence[Tuple[int, int]]) -> str:
    return ",".join("%d:%d" % kv for kv in pairs) or "empty"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_axioms(args) -> int:
    configs = _select_configs(args.field, args.flavor, args.eps)

    def job(cfg):
        fld, par = cfg
        return (check_form_axioms(par, fld, trials=args.trials,
                                  seed=args.seed),
                check_gamma_identities(par, fld, trials=args.gamma_trials,
                                       seed=args.seed))

    results = _pmap(job, configs)
    lines = ["# field\tflavor\teps\tsuite\ttrials\tchecks\tresult"]
    chart = []
    ok = True
    for (fld, par), (frep, grep) in zip(configs, results):
        for suite, rep in (("forms", frep), ("chain", grep)):
            ok = ok and rep.passed
            res = "pass" if rep.passed else "FAIL %s" % rep.failure
            lines.append("%s\t%s\t%s\t%s\t%d\t%d\t%s"
                         % (fld.name, par.flavor, _eps_str(par.epsilon), suite,
                            rep.trials, rep.checks, res))
            chart.append(("%s %s %s %s" % (fld.name, par.flavor,
                                           _eps_str(par.epsilon), suite),
                          rep.checks, rep.passed))
    lines.append("result\t%s" % ("pass" if ok else "FAIL"))
    _emit(lines, args.out, "axioms.tsv")
    if args.out:
        from .plots import save_check_chart

        save_check_chart(chart, "axiom and chain identity suites",
                         os.path.join(args.out, "axioms.png"))
    return 0 if ok else 1


def _invariant_rows(doc: Document) -> List[Tuple[str, str]]:
    p = doc.payload
    if doc.kind == "qspace":
        rows = [("invariants", str(invariants(p)))]
        if not doc.field.is_rational:
            rows.append(("witt_kernel_rank",
                         str(witt_class(p).kernel_rank)))
        rows.append(("gw", str(gw0_class(p))))
        return rows
    if doc.kind == "complex":
        hom = homology_ranks(p)
        return [("dims", _dims_str(sorted(p.dims.items()))),
                ("homology", ",".join("%d:%d" % (k, r)
                                      for k, r in sorted(hom.items())
                                      if r) or "none")]
    if doc.kind == "poincare":
        hom = homology_ranks(p.cx)
        return [("dims", _dims_str(sorted(p.cx.dims.items()))),
                ("homology", ",".join("%d:%d" % (k, r)
                                      for k, r in sorted(hom.items())
                                      if r) or "none"),
                ("gw", str(gw0_of_complex(p)))]
    if doc.kind == "mor_form":
        return [("x_dim", str(p.x_dim)), ("y_dim", str(p.y_dim))]
    return [("rank", str(p.xi.n)), ("lag_rank", str(p.lag_rank)),
            ("class", str(s2_class(p)))]


def cmd_invariants(args) -> int:
    doc = _load_doc(args.file)
    lines = ["# key\tvalue"]
    if doc.name:
        lines.append("name\t%s" % doc.name)
    lines.append("field\t%s" % doc.field.name)
    lines.append("param\t%s %s" % (_eps_str(doc.param.epsilon), doc.param.flavor))
    lines.append("payload\t%s" % doc.kind)
    for key, value in _invariant_rows(doc):
        lines.append("%s\t%s" % (key, value))
    ok = True
    for c in evaluate_expectations(doc):
        ok = ok and c.ok
        lines.append("expect\t%s\t%s\t%s\t%s"
                     % (c.key, c.want, c.got, "pass" if c.ok else "FAIL"))
    lines.append("result\t%s" % ("pass" if ok else "FAIL"))
    _emit(lines, None, "")
    return 0 if ok else 1


def cmd_witt_table(args) -> int:
    try:
        fld = field_by_name(args.field)
    except (ValueError, AssertionError):
        raise UsageError("unknown field %r" % args.field)
    if fld.is_rational:
        raise UsageError("witt-table needs a finite field")
    par = FormParam(args.eps if args.eps is not None else 1,
                    args.flavor or "quadratic")
    res = witt_table(par, fld, max_rank=args.max_rank, seed=args.seed,
                     samples=args.samples)
    lines = ["# witt table\tfield=%s\tflavor=%s\teps=%s"
             % (fld.name, par.flavor, _eps_str(par.epsilon)),
             "# class\tindex\tinvariants\torder"]
    for i, rep in enumerate(res.class_reps):
        lines.append("class\t%d\t%s\t%d"
                     % (i, invariants(QSpace(rep)), res.orders[i]))
    lines.append("# cayley\ti\tclass of rep_i + rep_j, j ascending")
    for i, row in enumerate(res.cayley):
        lines.append("cayley\t%d\t%s" % (i, " ".join(str(c) for c in row)))
    for s in res.scans:
        lines.append("scan\trank=%d\ttotal=%d\tnondeg=%d\taniso=%d\t%s"
                     % (s.rank, s.total, s.nondegenerate, s.anisotropic,
                        "exhaustive" if s.exhaustive else "sampled"))
    for name, ok, detail in res.checks:
        suffix = "" if ok or not detail else "\t%s" % detail
        lines.append("check\t%s\t%s%s"
                     % (name, "pass" if ok else "FAIL", suffix))
    lines.append("group_order\t%d" % res.group_order)
    if res.unit_class is not None:
        lines.append("unit_class\t%d\torder\t%d"
                     % (res.unit_class, res.orders[res.unit_class]))
    lines.append("result\t%s" % ("pass" if res.passed else "FAIL"))
    _emit(lines, args.out, "witt_table.tsv")
    if args.out:
        from .plots import save_cayley_heatmap

        save_cayley_heatmap(res.class_ranks, res.cayley,
                            "W(%s), %s, eps=%s" % (fld.name, par.flavor,
                                                   _eps_str(par.epsilon)),
                            os.path.join(args.out, "cayley.png"))
    return 0 if res.passed else 1


def cmd_reduce(args) -> int:
    doc = _load_doc(args.file)
    if doc.kind != "poincare":
        raise UsageError("reduce expects a poincare payload, got %s"
                         % doc.kind)
    try:
        res = reduce_full(doc.payload)
    except SurgeryError as e:
        raise CheckFailure("reduction failed: %s" % e)
    lines = ["# step\tn\tdims_in\tdims_mid\tdims_out"]
    chart = []
    for t in res.trace:
        lines.append("step\t%d\t%s\t%s\t%s"
                     % (t.n, _dims_str(t.dims_in), _dims_str(t.dims_mid),
                        _dims_str(t.dims_out)))
        chart.append((t.n, sum(d for _, d in t.dims_in),
                      sum(d for _, d in t.dims_mid),
                      sum(d for _, d in t.dims_out)))
    if res.ledger.entries:
        for e in res.ledger.entries:
            lines.append("ledger\trank=%d\tdegree=%d\tsign=%+d"
                         % (e.rank, e.degree, e.sign))
    else:
        lines.append("ledger\tempty")
    lines.append("residue\t%s" % invariants(res.space))
    total = gw0_class(res.space).add(
        eval_ledger(doc.param, doc.field, res.ledger))
    lines.append("gw\t%s" % total)
    _emit(lines, args.out, "reduce.tsv")
    if args.out:
        from .plots import save_reduce_trace

        save_reduce_trace(chart, "surgery trace: %s" % (doc.name or "complex"),
                          os.path.join(args.out, "reduce_trace.png"))
    return 0


def cmd_verify_relations(args) -> int:
    from .surgery import check_presentation

    configs = _select_configs(args.field, args.flavor, args.eps)

    def job(cfg):
        fld, par = cfg
        return check_presentation(par, fld, trials=args.trials,
                                  seed=args.seed)

    reports = _pmap(job, configs)
    lines = ["# field\tflavor\teps\trelation\ttrials\tresult"]
    ok = True
    for (fld, par), rep in zip(configs, reports):
        ok = ok and rep.passed
        for name in sorted(rep.trials):
            fails = [m for m in rep.failures if m.startswith(name + ":")]
            res = "pass" if not fails else "FAIL %s" % fails[0]
            lines.append("%s\t%s\t%s\t%s\t%d\t%s"
                         % (fld.name, par.flavor, _eps_str(par.epsilon), name,
                            rep.trials[name], res))
    lines.append("result\t%s" % ("pass" if ok else "FAIL"))
    _emit(lines, None, "")
    return 0 if ok else 1


def cmd_quis(args) -> int:
    def cx_of(doc: Document):
        if doc.kind == "complex":
            return doc.payload
        if doc.kind == "poincare":
            return doc.payload.cx
        raise UsageError("quis expects complex or poincare payloads, got %s"
                         % doc.kind)

    a = cx_of(_load_doc(args.file1))
    b = cx_of(_load_doc(args.file2))
    if a.field != b.field:
        raise UsageError("the two complexes live over different fields")
    ha, hb = homology_ranks(a), homology_ranks(b)
    degs = sorted(set(ha) | set(hb))
    lines = ["# degree\tleft\tright\tequal"]
    same = True
    for d in degs:
        ra, rb = ha.get(d, 0), hb.get(d, 0)
        same = same and ra == rb
        lines.append("%d\t%d\t%d\t%s" % (d, ra, rb, "yes" if ra == rb else "NO"))
    lines.append("quasi-isomorphic\t%s" % ("yes" if same else "no"))
    _emit(lines, None, "")
    return 0 if same else 1


def cmd_corpus_check(args) -> int:
    corpus = args.corpus
    try:
        names = sorted(n for n in os.listdir(corpus) if n.endswith(".form"))
    except OSError as e:
        raise UsageError(str(e))
    if not names:
        raise UsageError("no .form files in %s" % corpus)
    lines = ["# file\tkind\tfield\texpects\tresult"]
    chart = []
    ok = True
    for name in names:
        path = os.path.join(corpus, name)
        try:
            doc = load(path)
        except (ParseError, DocumentError) as e:
            ok = False
            lines.append("%s\t-\t-\t0\tFAIL %s" % (name, e))
            chart.append((name, 1, False))
            continue
        checks = evaluate_expectations(doc)
        bad = [c for c in checks if not c.ok]
        canon = serialize(doc)
        stable = serialize(parse(canon)) == canon
        if bad:
            res = "FAIL %s want %s got %s" % (bad[0].key, bad[0].want,
                                              bad[0].got)
        elif not stable:
            res = "FAIL round-trip is not canonical"
        else:
            res = "pass"
        good = not bad and stable
        ok = ok and good
        lines.append("%s\t%s\t%s\t%d\t%s"
                     % (name, doc.kind, doc.field.name, len(checks), res))
        chart.append((name, max(1, len(checks)), good))
    lines.append("checked\t%d" % len(names))
    lines.append("result\t%s" % ("pass" if ok else "FAIL"))
    _emit(lines, args.out, "corpus_check.tsv")
    if args.out:
        from .plots import save_check_chart

        save_check_chart(chart, "corpus expectation checks",
                         os.path.join(args.out, "corpus_check.png"))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--field", help="restrict to one field (2, 3, 5, or Q)")
    p.add_argument("--flavor", choices=("quadratic", "even", "symmetric"),
                   help="restrict to one flavor")
    p.add_argument("--eps", type=int, choices=(1, -1),
                   help="restrict to one duality sign")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qchain",
        description="Exact quadratic form theory on chain complexes: "
                    "axiom suites, invariants, Witt tables, and surgery "
                    "reduction over F_p and Q.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("axioms", help="run the form axiom and chain "
                       "identity suites")
    _add_config_args(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--gamma-trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="directory for the report and figures")
    p.set_defaults(fn=cmd_axioms)

    p = sub.add_parser("invariants", help="parse a document and report "
                       "its invariants and expectations")
    p.add_argument("file")
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("witt-table", help="classify forms over a finite "
                       "field by exhaustive oracle and print the Witt group")
    p.add_argument("--field", required=True)
    p.add_argument("--flavor", choices=("quadratic", "even", "symmetric"))
    p.add_argument("--eps", type=int, choices=(1, -1))
    p.add_argument("--max-rank", type=int, default=4)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--samples", type=int, default=300)
    p.add_argument("--out", help="directory for the report and figures")
    p.set_defaults(fn=cmd_witt_table)

    p = sub.add_parser("reduce", help="reduce a Poincare document to "
                       "degree 0 and print the surgery trace and GW class")
    p.add_argument("file")
    p.add_argument("--out", help="directory for the report and figures")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("verify-relations", help="verify the GW_0 "
                       "presentation relations on randomized instances")
    _add_config_args(p)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(fn=cmd_verify_relations)

    p = sub.add_parser("quis", help="decide whether two complexes are "
                       "quasi-isomorphic (equal homology ranks)")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(fn=cmd_quis)

    p = sub.add_parser("corpus-check", help="validate every corpus "
                       "document, its expectations, and canonicality")
    p.add_argument("--corpus", default="corpus")
    p.add_argument("--out", help="directory for the report and figures")
    p.set_defaults(fn=cmd_corpus_check)

    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except CheckFailure as e:
        print("FAIL\t%s" % e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
