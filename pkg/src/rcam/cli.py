"""Command line entry points.

``rcam run FILE`` evaluates forward to the final state, then reverses to
the initial state and verifies the round trip; ``rcam trace FILE`` prints
every step; ``rcam check FILE`` additionally runs the reference evaluator
and asserts the implementation-level properties; ``rcam serve`` starts the
step server for the browser stepper.

Exit codes: 0 success, 1 reversal failure, 2 parse error, 3 open term,
4 fuel exhausted, 5 property violation (check).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .crumble import IdGen, crumble_translate, env_measures, render_crumble
from .machine import (
    MachineState,
    check_state_invariants,
    init,
    read_back_state,
    render_env,
    run_backward,
    step_backward,
    step_forward,
    structural_image,
)
from .parser import ParseError, parse, print_term
from .serialize import state_snapshot
from .terms import alpha_eq, free_vars, normalize_beta_v, size_term

EXIT_OK = 0
EXIT_REVERSAL_FAILED = 1
EXIT_PARSE = 2
EXIT_OPEN_TERM = 3
EXIT_FUEL = 4
EXIT_PROPERTY = 5


@dataclass
class RunConfig:
    input_path: str | None
    mode: str
    fuel: int = 100_000
    id_start: int = 1
    port: int = 8653
    host: str = "127.0.0.1"
    emit_json: bool = False

    def __post_init__(self):
        if self.fuel <= 0:
            raise ValueError("fuel must be positive")
        if not 1024 <= self.port <= 65535:
            raise ValueError("port must be in 1024..65535")


class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _load_term(cfg: RunConfig):
    if cfg.input_path is None:
        raise _CliFailure(EXIT_PARSE, f"{cfg.mode}: an input file is required")
    try:
        with open(cfg.input_path) as fh:
            text = fh.read()
    except OSError as err:
        raise _CliFailure(EXIT_PARSE, f"cannot read {cfg.input_path}: {err}") from err
    try:
        term = parse(text)
    except ParseError as err:
        raise _CliFailure(EXIT_PARSE, f"parse error: {err}") from err
    free = free_vars(term)
    if free:
        raise _CliFailure(EXIT_OPEN_TERM, f"term not closed, free variables: {sorted(free)}")
    return term


def _machine(cfg: RunConfig, term) -> MachineState:
    return init(crumble_translate(term, IdGen(cfg.id_start)))


def cmd_run(cfg: RunConfig) -> int:
    term = _load_term(cfg)
    state = _machine(cfg, term)
    image0 = structural_image(state)
    out_of_fuel = False
    steps = 0
    while not state.is_final:
        if steps >= cfg.fuel:
            out_of_fuel = True
            break
        step_forward(state)
        steps += 1

    final_term = None if out_of_fuel else print_term(read_back_state(state))
    counters = state.counters.summary(state.hist_max)
    run_backward(state)
    reversed_ok = structural_image(state) == image0

    if cfg.emit_json:
        print(json.dumps({
            "term": print_term(term),
            "final": final_term,
            "fuel_exhausted": out_of_fuel,
            "counters": counters,
            "reversal": "PASS" if reversed_ok else "FAIL",
        }))
    else:
        print(f"term: {print_term(term)}")
        if out_of_fuel:
            print(f"fuel exhausted after {steps} steps")
        else:
            print(f"final: {final_term}")
        print(counters)
        print(f"reversal: {'PASS' if reversed_ok else 'FAIL'}")
    if not reversed_ok:
        return EXIT_REVERSAL_FAILED
    return EXIT_FUEL if out_of_fuel else EXIT_OK


def _trace_line(k: int, direction: str, rule: str, state: MachineState) -> str:
    body = f"{render_env(state.active)} || {render_env(state.evaluated)} | H={len(state.history)}"
    return f"#{k} {direction} {rule}  | {body}\n  ~> {print_term(read_back_state(state))}"


def cmd_trace(cfg: RunConfig) -> int:
    term = _load_term(cfg)
    crumble = crumble_translate(term, IdGen(cfg.id_start))
    state = init(crumble)

    def emit(k, direction, rule):
        if cfg.emit_json:
            doc = state_snapshot(state)
            doc["step"] = k
            doc["dir"] = direction
            doc["rule"] = rule
            print(json.dumps(doc))
        else:
            print(_trace_line(k, direction, rule, state))

    if not cfg.emit_json:
        print(f"crumble: {render_crumble(crumble)}")
    out_of_fuel = False
    k = 0
    while True:
        if k >= cfg.fuel:
            out_of_fuel = True
            break
        rule = step_forward(state)
        if rule is None:
            break
        k += 1
        emit(k, "fwd", rule)
    while True:
        rule = step_backward(state)
        if rule is None:
            break
        k += 1
        emit(k, "bwd", rule)
    if not cfg.emit_json:
        print(state.counters.summary(state.hist_max))
    return EXIT_FUEL if out_of_fuel else EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    term = _load_term(cfg)
    size = size_term(term)
    crumble = crumble_translate(term, IdGen(cfg.id_start))
    c_size, c_len = env_measures(crumble)

    def ensure(ok: bool, prop: str, detail: str):
        if not ok:
            raise _CliFailure(EXIT_PROPERTY, f"FAIL {prop}: {detail}")

    ensure(c_size <= 2 * size, "size-bound", f"{c_size} > 2*{size}")
    ensure(c_len <= size, "length-bound", f"{c_len} > {size}")

    state = init(crumble)
    state.debug = True
    image0 = structural_image(state)
    out_of_fuel = False
    steps = 0
    while not state.is_final:
        if steps >= cfg.fuel:
            out_of_fuel = True
            break
        check_state_invariants(state)
        step_forward(state)
        steps += 1
    check_state_invariants(state)

    counters = state.counters
    principal, search = counters.principal, counters.search
    final = read_back_state(state)
    run_backward(state)
    ensure(structural_image(state) == image0, "reversal", "backward run did not restore the initial state")

    if out_of_fuel:
        print(f"fuel exhausted after {steps} steps; reversal verified")
        return EXIT_FUEL

    nf, beta_steps = normalize_beta_v(term, cfg.fuel)
    ensure(principal == beta_steps, "principal-count", f"machine {principal} != calculus {beta_steps}")
    ensure(alpha_eq(final, nf), "final-term", f"{print_term(final)} !~ {print_term(nf)}")
    ensure(search <= (principal + 1) * size, "sea-bound", f"{search} > ({principal}+1)*{size}")
    ensure(
        counters.copy_work <= principal * 2 * size,
        "work-bound",
        f"{counters.copy_work} > {principal}*2*{size}",
    )
    print(f"check: PASS (p={principal} sea={search} |t|={size})")
    return EXIT_OK


def cmd_serve(cfg: RunConfig) -> int:
    from .server import serve_forever

    serve_forever(cfg.host, cfg.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rcam", description=__doc__)
    ap.add_argument("mode", choices=["run", "trace", "check", "serve"])
    ap.add_argument("file", nargs="?", help="input file holding one lambda term")
    ap.add_argument("--fuel", type=int, default=100_000, help="forward step budget")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--port", type=int, default=8653, help="serve: TCP port")
    ap.add_argument("--host", default="127.0.0.1", help="serve: bind address")
    ap.add_argument("--id-start", type=int, default=1, help="first fresh entry id")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            input_path=args.file,
            mode=args.mode,
            fuel=args.fuel,
            id_start=args.id_start,
            port=args.port,
            host=args.host,
            emit_json=args.json,
        )
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    commands = {"run": cmd_run, "trace": cmd_trace, "check": cmd_check, "serve": cmd_serve}
    try:
        return commands[cfg.mode](cfg)
    except _CliFailure as err:
        print(str(err), file=sys.stderr)
        return err.code


if __name__ == "__main__":
    sys.exit(main())
