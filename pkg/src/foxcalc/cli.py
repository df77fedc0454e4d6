"""Command-line entry point: ``foxcalc <subcommand> ...``.

Exit codes: 0 success, 2 bad input, 3 search bound exhausted, 64 unknown
subcommand.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import BoundExceeded, DomainError
from .fox import derivative, fundamental_defect
from .freiheit import (FalsifyBounds, Presentation, falsify_freeness, jacobian_abelianized,
                       load_presentation, one_relator_criterion, select_free_subset)
from .groupring import format_ring
from .laurent import LaurentDomain, infer_nvars
from .magnus import DEFAULT_CAP, expand, format_series, lcs_degree
from .ringmat import TransformLog, parse_matrix, triangularize
from .schreier import QuotientHom, build_transversal
from .words import FactorTable, free_table_for

EXIT_OK, EXIT_DOMAIN, EXIT_BOUND, EXIT_USAGE = 0, 2, 3, 64

SUBCOMMANDS = ("derive", "fundamental-check", "magnus", "schreier", "jacobian", "select", "verify", "replay")

USAGE = """usage: foxcalc <subcommand> [options]

subcommands:
  derive --gen G --word W [--pres FILE]        Fox derivative D_G(W)
  fundamental-check --word W [--pres FILE]     defect of the fundamental formula
  magnus expand|lcs --word W [--cap C]         truncated expansion / LCS degree
  schreier build --target T --radius R [--P ids] [--letters x,y | --pres FILE]
  jacobian FILE                                abelianized Fox Jacobian
  select FILE                                  free-subset selection report
  verify FILE --J ids [--bounds a,b,c,d]       bounded falsification of freeness
  replay --matrix M (--log FILE | --triangularize)
common flags: --format {text,json}, --seed N
"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DomainError(f"{self.prog}: {message}")


def _common(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)


def _table(args, text=""):
    if getattr(args, "pres", None):
        return load_presentation(args.pres).table
    letters = getattr(args, "letters", None)
    if letters:
        return FactorTable.free(sorted({x.strip() for x in letters.split(",") if x.strip()}))
    return free_table_for(text)


def _emit(args, text: str, data: dict):
    if args.format == "json":
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def cmd_derive(args):
    table = _table(args, f"{args.word} {args.gen}")
    w = table.parse(args.word)
    d = derivative(table.index(args.gen), w)
    s = format_ring(d)
    _emit(args, s, {"gen": args.gen, "word": args.word, "derivative": s})


def cmd_fundamental(args):
    table = _table(args, args.word)
    defect = fundamental_defect(table.parse(args.word))
    s = format_ring(defect)
    _emit(args, f"defect = {s}", {"word": args.word, "defect": s})


def cmd_magnus(args):
    table = _table(args, args.word)
    w = table.parse(args.word)
    names = table.names
    if args.action == "expand":
        s = format_series(expand(w, args.cap), ["X_" + n for n in names])
        _emit(args, s, {"word": args.word, "cap": args.cap, "series": s})
    else:
        rep = lcs_degree(w, args.cap)
        _emit(args, f"lcs = {rep}", {"word": args.word, "cap": args.cap, "lcs": str(rep)})


def _ids(table, text):
    if not text:
        return frozenset()
    out = set()
    for ref in text.split(","):
        ref = ref.strip()
        if ref.isdigit():
            out.add(table.check_id(int(ref) - 1).id)
        elif ref:
            out.add(table.index(ref))
    return frozenset(out)


def cmd_schreier(args):
    if args.action != "build":
        raise DomainError(f"unknown schreier action {args.action!r}")
    names_text = " ".join(part.split("=")[0] for part in args.target.split(";")[1:])
    table = _table(args, names_text)
    q = QuotientHom.parse(table, args.target)
    tr = build_transversal(q, _ids(table, args.P), args.radius)
    rows = [{"key": list(k), "rep": str(tr.reps[k]) or "1", "tag": tr.tags[k]} for k in tr.order]
    _emit(args, tr.dump(), {"radius": args.radius, "complete": tr.complete, "cosets": rows})


def cmd_jacobian(args):
    p = load_presentation(args.file)
    m = jacobian_abelianized(p, args.valuation)
    d = m.domain
    rows = [[d.format(a) for a in row] for row in m.rows]
    text = "\n".join(", ".join(r) for r in rows) if rows else f"(0 x {m.ncols})"
    _emit(args, text, {"rows": rows, "ncols": m.ncols})


def cmd_select(args):
    rep = select_free_subset(load_presentation(args.file), args.valuation)
    _emit(args, rep.to_text(), rep.to_dict())


def cmd_verify(args):
    p = load_presentation(args.file)
    J = p.ids(args.J.split(",")) if args.J else select_free_subset(p).J
    bounds = FalsifyBounds.parse(args.bounds)
    names = p.names
    head = [f"J = {{{', '.join(names[i] for i in sorted(J))}}}", f"bounds = {','.join(map(str, bounds.as_tuple()))}"]
    data = {"J": [names[i] for i in sorted(J)], "bounds": list(bounds.as_tuple())}
    if args.criterion:
        crits = []
        for i, r in enumerate(p.relators):
            c = one_relator_criterion(r, J, p)
            head.append(f"relator {i + 1}: verdict = {c.verdict} (syllable {str(c.syllable_test).lower()}, fox {str(c.fox_test).lower()})")
            crits.append({"verdict": c.verdict, "syllable_test": c.syllable_test, "fox_test": c.fox_test,
                          "lcs_stratum": c.lcs_stratum})
        data["criterion"] = crits
    ce = falsify_freeness(p, J, bounds)
    if ce is None:
        head.append("result = none (bounded search; not a proof)")
        data["result"] = None
    else:
        head.append("result = counterexample")
        head.append(ce.to_text())
        data["result"] = {"stage": ce.stage, "witness": str(ce.witness),
                          "replays": ce.verify()}
        if ce.stage == "enumeration":
            data["result"]["certificate"] = [[str(f) or "1", i + 1, s] for f, i, s in ce.conjugates]
        else:
            data["result"]["lie_degree"] = ce.lie_degree
            data["result"]["lie_element"] = ce.lie_element.to_format(names)
    _emit(args, "\n".join(head), data)


def cmd_replay(args):
    cells = [c for row in args.matrix.split(";") for c in row.split(",")]
    log_text = ""
    if args.log:
        with open(args.log, encoding="utf-8") as fh:
            log_text = fh.read()
    nvars = max(infer_nvars(cells), infer_nvars([log_text]))
    domain = LaurentDomain(nvars) if not args.augmentation else LaurentDomain.augmentation(nvars)
    m = parse_matrix(args.matrix, domain)
    if args.triangularize:
        tri = triangularize(m)
        out, log = tri.matrix, tri.log
    elif args.log is not None:
        log = TransformLog.parse(log_text, domain)
        out = log.replay(m)
    else:
        raise DomainError("replay needs --log FILE or --triangularize")
    text = out.format()
    if args.triangularize:
        text += f"\nrank = {tri.rank}\nlog:\n" + (log.serialize(domain) or "(empty)")
    data = {"matrix": out.format(), "log": log.serialize(domain).splitlines()}
    if args.triangularize:
        data["rank"] = tri.rank
    _emit(args, text, data)


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="foxcalc", add_help=False)
    sub = root.add_subparsers(dest="cmd", parser_class=_Parser)

    p = sub.add_parser("derive")
    p.add_argument("--gen", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--pres")
    p.add_argument("--letters")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("fundamental-check")
    p.add_argument("--word", required=True)
    p.add_argument("--pres")
    p.add_argument("--letters")
    p.set_defaults(func=cmd_fundamental)

    p = sub.add_parser("magnus")
    p.add_argument("action", choices=("expand", "lcs"))
    p.add_argument("--word", required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--pres")
    p.add_argument("--letters")
    p.set_defaults(func=cmd_magnus)

    p = sub.add_parser("schreier")
    p.add_argument("action")
    p.add_argument("--target", required=True)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--P", default="")
    p.add_argument("--pres")
    p.add_argument("--letters")
    p.set_defaults(func=cmd_schreier)

    for name, fn in (("jacobian", cmd_jacobian), ("select", cmd_select)):
        p = sub.add_parser(name)
        p.add_argument("file")
        p.add_argument("--valuation", choices=("trivial", "augmentation"), default="trivial")
        p.set_defaults(func=fn)

    p = sub.add_parser("verify")
    p.add_argument("file")
    p.add_argument("--J")
    p.add_argument("--bounds", default="2,2,6,3")
    p.add_argument("--criterion", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay")
    p.add_argument("--matrix", required=True)
    p.add_argument("--log")
    p.add_argument("--triangularize", action="store_true")
    p.add_argument("--augmentation", action="store_true")
    p.set_defaults(func=cmd_replay)

    for p in sub.choices.values():
        _common(p)
    return root


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in SUBCOMMANDS:
        sys.stdout.write(USAGE)
        return EXIT_USAGE
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except BoundExceeded as e:
        print(f"error: bound exceeded: {e}", file=sys.stderr)
        return EXIT_BOUND
    except (DomainError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
