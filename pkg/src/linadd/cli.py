"""Command-line surface.

Subcommands mirror the library operations one-to-one: ``check``,
``normalize``, ``cutelim``, ``eta-expand``, ``inhabitants``, ``translate``,
``gen``, and ``suite``.  Every subcommand can emit a JSON report with the
schema {command, inputs, measurements, verdict, details[]}; the process exits
0 exactly when every executed verdict is pass (or info).
"""

from __future__ import annotations

import argparse
import json
import sys

from .terms import alpha_equal, term_size
from .typesys import bool_type, tensor_type, type_size, unit_type
from .derivation import (
    LAM, check, is_cut_free, metrics,
)
from .reduce import BudgetExceeded, normalize, push_reduction, beta_eta_equal
from .cutelim import CutElimError, eliminate
from .inhabit import InhabitError, enumerate_inhabitants, eta_expand
from .translate import (
    GadgetError, GadgetLibrary, check_soundness, compression_report,
    d_tensor_pair, d_app, identity_derivation, translate_derivation,
    translate_type,
)
from .families import gen_add, gen_applied, gen_ladd
from .frontend import (
    ParseError, load_derivation, load_term, parse_type,
    print_derivation, print_term, print_type,
)
from . import corpus as corpus_mod


class Report:
    def __init__(self, command: str, inputs: dict):
        self.command = command
        self.inputs = inputs
        self.measurements: dict = {}
        self.verdict = "info"
        self.details: list = []

    def fail(self, message: str):
        self.verdict = "fail"
        self.details.append(message)

    def passed(self):
        if self.verdict != "fail":
            self.verdict = "pass"

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "measurements": self.measurements,
            "verdict": self.verdict,
            "details": self.details,
        }


def _emit(report: Report, args, text_lines=()):
    if args.json:
        json.dump(report.as_dict(), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        for line in text_lines:
            print(line)
        for d in report.details:
            print(d)
        # keep stdout clean for redirection; the verdict is diagnostic
        print("%s: %s" % (report.command, report.verdict), file=sys.stderr)
    return 0 if report.verdict in ("pass", "info") else 1


def _parse_type_arg(text: str):
    """A type literal, or one of the macro names unit/bool."""
    named = {"unit": unit_type(), "bool": bool_type(),
             "1": unit_type(), "B": bool_type()}
    if text in named:
        return named[text]
    return parse_type(text)


# -- subcommands --------------------------------------------------------------

def cmd_check(args) -> int:
    d = load_derivation(args.file)
    report = Report("check", {"file": args.file, "system": args.system})
    bad = check(d, args.system)
    m = metrics(d)
    report.measurements = {
        "size": m.size, "weight": m.weight,
        "subject_size": term_size(d.conclusion.subject),
        "violations": len(bad),
    }
    if bad:
        for v in bad:
            report.fail(str(v))
    else:
        report.passed()
    return _emit(report, args, ["checked %s: %d violations" % (args.file, len(bad))])


def cmd_normalize(args) -> int:
    t = load_term(args.file)
    report = Report("normalize", {
        "file": args.file, "strategy": args.strategy, "seed": args.seed,
    })
    try:
        res = normalize(t, strategy=args.strategy, budget=args.budget,
                        keep_trace=args.trace, seed=args.seed)
    except BudgetExceeded:
        report.fail("reduction budget exhausted")
        return _emit(report, args)
    report.measurements = {
        "input_size": term_size(t),
        "normal_form_size": term_size(res.term),
        "steps": res.steps,
    }
    report.passed()
    lines = [print_term(res.term)]
    if args.trace and res.trace:
        for r, after in res.trace:
            lines.append(";; %s at %s -> size %d"
                         % (r.kind, "/".join(map(str, r.path)) or "root",
                            term_size(after)))
        report.measurements["trace"] = [
            {"kind": r.kind, "path": list(r.path), "size_after": term_size(a)}
            for r, a in res.trace]
    return _emit(report, args, lines)


def cmd_cutelim(args) -> int:
    d = load_derivation(args.file)
    report = Report("cutelim", {"file": args.file, "budget": args.budget})
    try:
        out, trace = eliminate(d, budget=args.budget)
    except (CutElimError, Exception) as e:
        report.fail(str(e))
        return _emit(report, args)
    m0, m1 = metrics(d), metrics(out)
    report.measurements = {
        "input_size": m0.size, "output_size": m1.size,
        "steps": trace.total_steps, "rounds": trace.rounds,
        "step_kinds": trace.counts(),
    }
    if args.trace:
        per_round: dict = {}
        for s in trace.steps:
            per_round.setdefault(s.round, {"steps": 0, "potential": s.potential})
            per_round[s.round]["steps"] += 1
            per_round[s.round]["potential"] = s.potential
        report.measurements["rounds_detail"] = [
            {"round": r, **v} for r, v in sorted(per_round.items())]
    report.passed()
    return _emit(report, args, [print_derivation(out)])


def cmd_eta_expand(args) -> int:
    d = load_derivation(args.file)
    report = Report("eta-expand", {"file": args.file})
    try:
        out = eta_expand(d)
    except InhabitError as e:
        report.fail(str(e))
        return _emit(report, args)
    report.measurements = {
        "input_size": metrics(d).size, "output_size": metrics(out).size,
    }
    report.passed()
    return _emit(report, args, [print_derivation(out)])


def cmd_inhabitants(args) -> int:
    a = _parse_type_arg(args.type)
    report = Report("inhabitants", {"type": print_type(a)})
    try:
        found = enumerate_inhabitants(a)
    except InhabitError as e:
        report.fail(str(e))
        return _emit(report, args)
    report.measurements = {"count": found.count}
    report.details = [print_term(t) for t in found.terms()]
    report.passed()
    lines = ["%d inhabitant(s) of %s" % (found.count, print_type(a))]
    return _emit(report, args, lines)


def cmd_translate(args) -> int:
    d = load_derivation(args.file)
    report = Report("translate", {"file": args.file})
    lib = GadgetLibrary()
    try:
        out = translate_derivation(d, lib)
    except GadgetError as e:
        report.fail(str(e))
        return _emit(report, args)
    report.measurements = compression_report(d, lib)
    report.passed()
    return _emit(report, args, [print_derivation(out)])


def cmd_gen(args) -> int:
    a = _parse_type_arg(args.base)
    report = Report("gen", {"family": args.family, "n": args.n,
                            "base": print_type(a), "apply": args.apply})
    try:
        if args.family == "add":
            term, d = gen_add(args.n, a)
            system = "imall2"
        else:
            term, d = gen_ladd(args.n, a)
            system = LAM
        if args.apply:
            from .inhabit import maximal_value
            mv = maximal_value(a)
            if mv is None:
                raise InhabitError("base type is uninhabited")
            d = gen_applied(d, mv[1])
            term = d.conclusion.subject
    except (InhabitError, ValueError) as e:
        report.fail(str(e))
        return _emit(report, args)
    bad = check(d, system)
    report.measurements = {
        "term_size": term_size(term),
        "derivation_size": metrics(d).size,
        "system": system,
    }
    if bad:
        report.fail(str(bad[0]))
        return _emit(report, args)
    report.passed()
    text = print_derivation(d) if args.derivation else print_term(term)
    if args.output:
        with open(args.output, "w") as f:
            f.write(text + "\n")
        return _emit(report, args, ["wrote %s" % args.output])
    return _emit(report, args, [text])


# -- suites -------------------------------------------------------------------

def _suite_subject_reduction(report: Report, args):
    """Every one-step reduct of every corpus subject has a rebuilt, rechecked
    derivation of the same judgement."""
    from .reduce import find_redexes
    entries = corpus_mod.lam_entries(corpus_mod.build_corpus(seed=args.seed))
    checked = 0
    for e in entries:
        d = e.derivation
        for r in find_redexes(d.conclusion.subject):
            d2 = push_reduction(d, r)
            bad = check(d2, LAM)
            if bad:
                report.fail("%s: reduct fails to check: %s" % (e.name, bad[0]))
                return
            checked += 1
    report.measurements.update(entries=len(entries), reducts_checked=checked)


def _suite_blowup(report: Report, args):
    """add grows results exponentially in n + 1 steps; ladd stays linear and
    shrinks at every one of its 2n + 1 steps."""
    one = unit_type()
    table = []
    for n in range(1, 9):
        at, ad = gen_add(n, one)
        lt, ld = gen_ladd(n, one)
        add_app = gen_applied(ad, identity_derivation())
        ladd_app = gen_applied(ld, identity_derivation())
        ra = normalize(add_app.conclusion.subject)
        rl = normalize(ladd_app.conclusion.subject, keep_trace=True)
        row = {"n": n, "add_size": term_size(at), "ladd_size": term_size(lt),
               "add_steps": ra.steps, "ladd_steps": rl.steps,
               "add_nf_size": term_size(ra.term),
               "ladd_nf_size": term_size(rl.term)}
        table.append(row)
        if term_size(at.body) != 5 * n + 1:
            report.fail("add size law fails at n=%d" % n)
        if ra.steps != n + 1 or rl.steps != 2 * n + 1:
            report.fail("step count law fails at n=%d" % n)
        sizes = [term_size(ladd_app.conclusion.subject)]
        sizes += [term_size(t) for _, t in rl.trace]
        if any(b >= a for a, b in zip(sizes, sizes[1:])):
            report.fail("ladd size not strictly decreasing at n=%d" % n)
    report.measurements["table"] = table


def _suite_cutelim_cubic(report: Report, args):
    """Elimination steps stay within a cubic bound fitted on the smallest
    family members."""
    fam = corpus_mod.cubic_family(8)
    rows = []
    for n, d in fam:
        out, trace = eliminate(d)
        if not is_cut_free(out):
            report.fail("n=%d: result retains a cut" % n)
        rows.append({"n": n, "size": metrics(d).size,
                     "steps": trace.total_steps})
    fit = max(r["steps"] / r["size"] ** 3 for r in rows[:3])
    for r in rows:
        if r["steps"] > fit * r["size"] ** 3 + 1e-9:
            report.fail("cubic bound violated at n=%d" % r["n"])
    report.measurements.update(constant=fit, table=rows)


def _suite_duplicator(report: Report, args):
    """Erasers discard and duplicators duplicate every closed normal
    inhabitant, beta-eta."""
    lib = GadgetLibrary()
    one, b = unit_type(), bool_type()
    cases = [one, b, tensor_type(b, b)]
    total = 0
    for a in cases:
        inhabitants = enumerate_inhabitants(a)
        era, dup = lib.eraser(a), lib.duplicator(a)
        for _, vd in inhabitants.members:
            tv = translate_derivation(vd, lib)
            v = tv.conclusion.subject
            if not beta_eta_equal(d_app(era, tv).conclusion.subject,
                                  identity_derivation().conclusion.subject):
                report.fail("eraser fails on an inhabitant of %s" % print_type(a))
            want = d_tensor_pair(tv, tv).conclusion.subject
            if not beta_eta_equal(d_app(dup, tv).conclusion.subject, want):
                report.fail("duplicator fails on an inhabitant of %s" % print_type(a))
            total += 1
    report.measurements.update(types=len(cases), inhabitants_checked=total)


def _suite_soundness(report: Report, args):
    """Each elimination step's translation preserves the subject beta-eta."""
    entries = corpus_mod.soundness_entries(corpus_mod.build_corpus(seed=args.seed))
    lib = GadgetLibrary()
    steps = 0
    for e in entries:
        _, trace = eliminate(e.derivation, keep_derivations=True)
        for before, after in zip(trace.snapshots, trace.snapshots[1:]):
            if not check_soundness(before, after, lib):
                report.fail("%s: translation not preserved across a step" % e.name)
                return
            steps += 1
    report.measurements.update(entries=len(entries), steps_checked=steps)


def _suite_confluence(report: Report, args):
    """Leftmost, rightmost, and seeded random strategies reach the same
    normal form on every corpus subject."""
    entries = corpus_mod.lam_entries(corpus_mod.build_corpus(seed=args.seed))
    for e in entries:
        t = e.derivation.conclusion.subject
        ref = normalize(t, strategy="leftmost").term
        others = [normalize(t, strategy="rightmost").term]
        for s in range(3):
            others.append(normalize(t, strategy="random", seed=s).term)
        if any(not alpha_equal(ref, o) for o in others):
            report.fail("%s: strategies disagree on the normal form" % e.name)
            return
    report.measurements.update(entries=len(entries), strategies=5)


_SUITES = {
    "subject-reduction": _suite_subject_reduction,
    "blowup": _suite_blowup,
    "cutelim-cubic": _suite_cutelim_cubic,
    "duplicator": _suite_duplicator,
    "soundness": _suite_soundness,
    "confluence": _suite_confluence,
}


def cmd_suite(args) -> int:
    names = list(_SUITES) if args.name == "all" else [args.name]
    code = 0
    for name in names:
        report = Report("suite", {"name": name, "seed": args.seed})
        try:
            _SUITES[name](report, args)
        except Exception as e:  # suite failures never abort the process
            report.fail("%s: %s" % (type(e).__name__, e))
        report.passed()
        code |= _emit(report, args)
    return code


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="linadd",
        description="Check, reduce, and translate linear-additive derivations.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true",
                        help="emit a JSON report instead of plain text")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=None)
        sp.add_argument("--trace", action="store_true")

    sp = sub.add_parser("check", help="check a .lamd derivation file")
    sp.add_argument("file")
    sp.add_argument("--system", choices=("lam", "imall2", "imll2"),
                    default="lam")
    common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("normalize", help="normalize a .lam term file")
    sp.add_argument("file")
    sp.add_argument("--strategy", choices=("leftmost", "rightmost", "random"),
                    default="leftmost")
    common(sp)
    sp.set_defaults(fn=cmd_normalize)

    sp = sub.add_parser("cutelim", help="eliminate cuts from a derivation")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(fn=cmd_cutelim)

    sp = sub.add_parser("eta-expand", help="eta-expand a cut-free derivation")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(fn=cmd_eta_expand)

    sp = sub.add_parser("inhabitants",
                        help="enumerate the closed normal inhabitants of a type")
    sp.add_argument("type", help="a type literal, or the name unit/bool")
    common(sp)
    sp.set_defaults(fn=cmd_inhabitants)

    sp = sub.add_parser("translate",
                        help="translate a derivation into the multiplicative fragment")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(fn=cmd_translate)

    sp = sub.add_parser("gen", help="generate a nesting-family member")
    sp.add_argument("family", choices=("add", "ladd"))
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--base", default="unit",
                    help="base type (default: unit)")
    sp.add_argument("--apply", action="store_true",
                    help="apply to the size-maximal base value")
    sp.add_argument("--derivation", action="store_true",
                    help="print the derivation instead of the term")
    sp.add_argument("-o", "--output", default=None)
    common(sp)
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("suite", help="run a verification suite")
    sp.add_argument("name", choices=tuple(_SUITES) + ("all",))
    common(sp)
    sp.set_defaults(fn=cmd_suite)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
