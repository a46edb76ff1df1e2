"""Command-line entry points.

Exit codes: 0 success, 1 diagnostics or unrealizable, 2 usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .analyses import RealizableError, check_monitor, find_trivial, \
    unrealizable_core
from .diagnostics import DiagnosticsError, SourceCatalog
from .game import to_gr1
from .gr1 import ConcreteCapExceeded, SolveResourceError, enumerate_concrete, \
    solve, synthesize_symbolic
from .lowering import lower
from .runtime import WalkSession, handle_of, load_file, save_file
from .semcheck import check, resolve_imports
from .service import SessionRegistry, create_app, default_ui_dir
from .syntax import nodes as n


def _load_checked(path: str, catalog: SourceCatalog):
    ast = resolve_imports(path, catalog=catalog)
    return check(ast)


def _print_diags(diags, catalog):
    for d in diags:
        print(d.render(catalog), file=sys.stderr)


def cmd_check(args) -> int:
    catalog = SourceCatalog()
    try:
        checked = _load_checked(args.file, catalog)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DiagnosticsError as exc:
        _print_diags(exc.diagnostics, catalog)
        return 1
    _print_diags(checked.warnings, catalog)
    n_elems = len(checked.ast.elements)
    print(f"{args.file}: OK ({n_elems} elements)")
    return 0


def cmd_synth(args) -> int:
    catalog = SourceCatalog()
    try:
        checked = _load_checked(args.file, catalog)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DiagnosticsError as exc:
        _print_diags(exc.diagnostics, catalog)
        return 1
    low = lower(checked)
    if args.emit_kernel:
        print(low.kernel.pretty(), end="")
    game = to_gr1(low)
    try:
        realizable, memo = solve(game)
    except SolveResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not realizable:
        print("Unrealizable")
        print(f"hint: run `spectra core {args.file}` to compute an "
              f"unrealizable core", file=sys.stderr)
        return 1
    print("Realizable")
    if args.output is None and not args.concrete:
        return 0
    ctrl = synthesize_symbolic(game, memo)
    if args.output:
        save_file(handle_of(ctrl), args.output)
        print(f"controller written to {args.output}")
    if args.concrete:
        try:
            conc = enumerate_concrete(ctrl, max_states=args.max_states)
        except ConcreteCapExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        _print_concrete(conc)
    return 0


def _print_concrete(conc) -> None:
    print(f"concrete controller: {len(conc.states)} states, "
          f"{len(conc.transitions)} transitions")
    names = conc.var_names
    for i, state in enumerate(conc.states):
        vals = " ".join(f"{nm}={int(v)}" for nm, v in zip(names, state))
        print(f"  s{i}: {vals}")
    x_names = names[:conc.x_count]
    for (sid, x_key), nid in sorted(conc.transitions.items()):
        inp = " ".join(f"{nm}={int(v)}" for nm, v in zip(x_names, x_key))
        print(f"  s{sid} --[{inp}]--> s{nid}")


def cmd_core(args) -> int:
    catalog = SourceCatalog()
    try:
        checked = _load_checked(args.file, catalog)
    except DiagnosticsError as exc:
        _print_diags(exc.diagnostics, catalog)
        return 1
    try:
        report = unrealizable_core(checked)
    except RealizableError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    print(f"unrealizable core: {len(report.core)} guarantee(s) "
          f"({report.checks_performed} realizability checks, "
          f"minimal={report.minimal})")
    for g in report.core:
        line, col = catalog.position(g.span)
        print(f"{g.span.file}:{line}:{col}: guarantee {g.label}")
    return 0


def cmd_lint(args) -> int:
    catalog = SourceCatalog()
    try:
        checked = _load_checked(args.file, catalog)
    except DiagnosticsError as exc:
        _print_diags(exc.diagnostics, catalog)
        return 1
    findings = 0
    for t in find_trivial(checked):
        line, col = catalog.position(t.span)
        print(f"{t.span.file}:{line}:{col}: warning: {t.label} is "
              f"{t.verdict}")
        findings += 1
    for elem in checked.ast.elements:
        if not isinstance(elem, n.Monitor):
            continue
        verdict = check_monitor(checked, elem.name)
        if verdict.deterministic and verdict.complete:
            continue
        line, col = catalog.position(elem.span)
        problems = []
        if not verdict.deterministic:
            problems.append("not deterministic")
        if not verdict.complete:
            problems.append("not complete")
        msg = f"monitor {elem.name} is {' and '.join(problems)}"
        if verdict.witness is not None:
            msg += f" (witness: {verdict.witness})"
        print(f"{elem.span.file}:{line}:{col}: warning: {msg}")
        findings += 1
    if findings:
        return 1
    print(f"{args.file}: no findings")
    return 0


def _session_for(path: str):
    if path.endswith(".spcc"):
        return WalkSession(load_file(path)), os.path.basename(path)
    catalog = SourceCatalog()
    checked = _load_checked(path, catalog)
    game = to_gr1(lower(checked))
    realizable, memo = solve(game)
    if not realizable:
        raise RealizableError("specification is unrealizable; run "
                              "`spectra core` first")
    ctrl = synthesize_symbolic(game, memo)
    return WalkSession(handle_of(ctrl)), os.path.basename(path)


def cmd_walk(args) -> int:
    import uvicorn

    catalog = SourceCatalog()
    try:
        session, name = _session_for(args.file)
    except DiagnosticsError as exc:
        _print_diags(exc.diagnostics, catalog)
        return 1
    except RealizableError as exc:
        print("Unrealizable", file=sys.stderr)
        print(str(exc), file=sys.stderr)
        return 1
    registry = SessionRegistry()
    sid = registry.add(session, name)
    app = create_app(registry, ui_dir=default_ui_dir())
    url = f"http://{args.host}:{args.port}/?session={sid}"
    print(f"Walker session {sid} for {name}")
    print(f"Open {url}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    app = create_app(SessionRegistry(), ui_dir=default_ui_dir())
    print(f"Walker service on http://{args.host}:{args.port}/")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="spectra",
        description="Spectra toolchain: check, synthesize, execute, and "
                    "analyze reactive specifications")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="parse, resolve imports, and check")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("synth", help="decide realizability and synthesize")
    s.add_argument("file")
    s.add_argument("-o", "--output", metavar="OUT.spcc",
                   help="write the symbolic controller")
    s.add_argument("--concrete", action="store_true",
                   help="enumerate and print the concrete controller")
    s.add_argument("--max-states", type=int, default=50000,
                   help="state cap for --concrete (default 50000)")
    s.add_argument("--emit-kernel", action="store_true",
                   help="print the lowered kernel specification")
    s.set_defaults(func=cmd_synth)

    k = sub.add_parser("core", help="compute an unrealizable core (ddmin)")
    k.add_argument("file")
    k.set_defaults(func=cmd_core)

    l = sub.add_parser("lint", help="find trivial constraints and broken "
                                    "monitors")
    l.add_argument("file")
    l.set_defaults(func=cmd_lint)

    w = sub.add_parser("walk", help="synthesize (or load) a controller and "
                                    "open the walker")
    w.add_argument("file", help=".spectra specification or .spcc controller")
    w.add_argument("--port", type=int, default=8712)
    w.add_argument("--host", default="127.0.0.1")
    w.set_defaults(func=cmd_walk)

    v = sub.add_parser("serve", help="start the walker service")
    v.add_argument("--port", type=int, default=8712)
    v.add_argument("--host", default="127.0.0.1")
    v.set_defaults(func=cmd_serve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
