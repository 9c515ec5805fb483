"""Command-line front end: a thin client of the analysis service.

Commands load interchange-format JSON files, send them to the service and
render the response.  By default the service runs in-process (no server
needed); ``--server URL`` targets a running instance instead, so the same
commands work against a shared deployment.

Exit codes: 0 = verdict true/feasible, 1 = verdict false/infeasible,
2 = invalid input, 3 = internal or transport error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

from .rational import Q, decimal_str


class _InputError(Exception):
    pass


class _ServiceClient:
    """POST/GET against either the in-process app or a remote server."""

    def __init__(self, server: str | None):
        self.server = server

    def request(self, method: str, path: str, payload=None):
        if self.server is not None:
            with httpx.Client(base_url=self.server, timeout=None) as client:
                response = client.request(method, path, json=payload)
        else:
            from .service import app

            async def go():
                transport = httpx.ASGITransport(app=app)
                async with httpx.AsyncClient(
                    transport=transport, base_url="http://nsbox", timeout=None
                ) as client:
                    return await client.request(method, path, json=payload)

            response = asyncio.run(go())
        return response


def _load_json(path: str):
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise _InputError(f"{path} is not valid JSON: {exc}")


def _post(client, path, payload):
    response = client.request("POST", path, payload)
    if response.status_code in (400, 422):
        detail = response.json().get("detail", response.text)
        raise _InputError(f"rejected input: {detail}")
    response.raise_for_status()
    return response.json()


def _fmt(value: str, decimal: bool) -> str:
    if not decimal:
        return value
    try:
        return f"{value} ({decimal_str(Q(value))})"
    except (ValueError, ZeroDivisionError):
        return value


# ---------------------------------------------------------------------------
# command handlers: each returns (exit_code, text lines, machine report)


def _report(command, verdicts, values, certificates=None):
    doc = {
        "command": command,
        "verdicts": [{"name": k, "value": v} for k, v in verdicts],
        "values": values,
    }
    if certificates:
        doc["certificates"] = certificates
    return doc


def _cmd_check(client, args):
    data = _post(client, "/check", {"behavior": _load_json(args.file)})
    ok = data["valid"] and data["no_signaling"]
    lines = [
        f"valid probability table: {'yes' if data['valid'] else 'no'}",
        f"no-signaling: {'yes' if data['no_signaling'] else 'no'}",
    ]
    lines += [f"  {v}" for v in data["violations"]]
    lines += [f"  {w}" for w in data["signaling_witnesses"]]
    report = _report(
        "check",
        [("valid", data["valid"]), ("no_signaling", data["no_signaling"])],
        {},
    )
    return (0 if ok else 1), lines, report

def _cmd_hardy(client, args):
    payload = {"behavior": _load_json(args.file)}
    if args.pattern:
        payload["pattern"] = _load_json(args.pattern)
    data = _post(client, "/hardy", payload)
    lines = [
        f"success = {_fmt(data['success'], args.decimal)}",
        f"zero cells satisfied: {'yes' if data['zeros_satisfied'] else 'no'}",
        f"post-quantum: {'yes' if data['post_quantum'] else 'no'}"
        f" (threshold {data['threshold']})",
    ]
    if not data["zeros_satisfied"]:
        for cell, value in data["residuals"].items():
            if value != "0":
                lines.append(f"  residual at {cell}: {_fmt(value, args.decimal)}")
    report = _report(
        "hardy",
        [
            ("zeros_satisfied", data["zeros_satisfied"]),
            ("hardy", data["hardy"]),
            ("post_quantum", data["post_quantum"]),
        ],
        {
            "success": data["success"],
            "threshold": data["threshold"],
            "residuals": data["residuals"],
        },
    )
    return (0 if data["post_quantum"] else 1), lines, report


def _cmd_local(client, args):
    data = _post(client, "/local", {"behavior": _load_json(args.file)})
    lines = [f"local model: {'exists' if data['feasible'] else 'none (nonlocal)'}"]
    certificates = None
    if data["feasible"]:
        lines.append(f"  {len(data['weights'])} strategies carry weight")
    else:
        certificates = {"local": data["certificate"]}
        if args.certificate:
            lines.append("infeasibility certificate (cell: multiplier):")
            lines += [f"  {c}: {v}" for c, v in data["certificate"].items() if v != "0"]
    report = _report(
        "local",
        [("local", data["feasible"])],
        {"weights": data["weights"]} if data["feasible"] else {},
        certificates,
    )
    return (0 if data["feasible"] else 1), lines, report


def _cmd_tobl(client, args):
    payload = {"behavior": _load_json(args.file)}
    if args.cut:
        payload["cut"] = args.cut
    data = _post(client, "/tobl", payload)
    lines = []
    certificates = {}
    for name, result in data["cuts"].items():
        status = "feasible" if result["feasible"] else "infeasible"
        lines.append(f"{name}: {status}")
        if result["feasible"]:
            lines.append(f"  decomposition with {len(result['decomposition'])} terms")
        else:
            certificates[name] = result["certificate"]
            if args.certificate:
                lines += [
                    f"  {c}: {v}"
                    for c, v in result["certificate"].items()
                    if v != "0"
                ]
    ok = data["feasible_on_requested"]
    report = _report(
        "tobl",
        [(name, r["feasible"]) for name, r in data["cuts"].items()],
        {
            name: {"terms": r["decomposition"]}
            for name, r in data["cuts"].items()
            if r["feasible"]
        },
        certificates or None,
    )
    return (0 if ok else 1), lines, report


def _cmd_gyni(client, args):
    data = _post(client, "/gyni", {"behavior": _load_json(args.file)})
    lines = [
        f"game value = {_fmt(data['value'], args.decimal)}",
        f"classical bound = {_fmt(data['classical_bound'], args.decimal)}",
        f"inequality satisfied: {'yes' if data['satisfied'] else 'no (violation)'}",
    ]
    report = _report(
        "gyni",
        [("satisfied", data["satisfied"])],
        {"value": data["value"], "classical_bound": data["classical_bound"]},
    )
    return (0 if data["satisfied"] else 1), lines, report


def _cmd_wirings(client, args):
    payload = {"behavior": _load_json(args.file), "cut": args.cut}
    data = _post(client, "/wirings", payload)
    lines = [
        f"wirings checked: {data['wirings_checked']}",
        f"distinct wired boxes: {data['distinct_behaviors']}",
        f"all local: {'yes' if data['all_local'] else 'no'}",
    ]
    certificates = None
    if data["counterexample"] is not None:
        ce = data["counterexample"]
        lines.append(f"first nonlocal wiring at rank {ce['rank']}")
        certificates = {"wired": ce["certificate"]}
        if args.certificate:
            lines.append("bipartite infeasibility certificate:")
            lines += [f"  {c}: {v}" for c, v in ce["certificate"].items() if v != "0"]
    report = _report(
        "wirings",
        [("all_local", data["all_local"])],
        {
            "wirings_checked": data["wirings_checked"],
            "distinct_behaviors": data["distinct_behaviors"],
            **(
                {"counterexample_rank": data["counterexample"]["rank"]}
                if data["counterexample"]
                else {}
            ),
        },
        certificates,
    )
    return (0 if data["all_local"] else 1), lines, report


def _cmd_optimize(client, args):
    payload = {"set": args.set}
    if args.pattern:
        payload["pattern"] = _load_json(args.pattern)
    if args.expression:
        payload["expression"] = _load_json(args.expression)
    if args.cut:
        payload["cuts"] = args.cut
    data = _post(client, "/optimize", payload)
    lines = [f"maximum over {args.set}: {_fmt(data['value'], args.decimal)}"]
    report = _report(
        "optimize", [], {"value": data["value"], "optimizer": data["behavior"]}
    )
    return 0, lines, report


def _cmd_reproduce(client, args):
    data = _post(client, "/reproduce-paper", {})
    lines = []
    for claim in data["claims"]:
        mark = "pass" if claim["passed"] else "FAIL"
        lines.append(f"[{mark}] {claim['claim_id']}: {claim['description']}")
        if not claim["passed"]:
            lines.append(f"       expected {claim['expected']}, got {claim['computed']}")
    good = sum(1 for c in data["claims"] if c["passed"])
    lines.append(f"{good}/{len(data['claims'])} claims pass")
    report = _report(
        "reproduce-paper",
        [(c["claim_id"], c["passed"]) for c in data["claims"]],
        {"passed": good, "total": len(data["claims"])},
    )
    return (0 if data["all_passed"] else 1), lines, report


# ---------------------------------------------------------------------------


def _common_flags(defaults: bool) -> argparse.ArgumentParser:
    """The shared flags, accepted both before and after the subcommand.

    The main parser's copy carries the real defaults; the subparser copies
    use SUPPRESS so they never clobber a value given before the subcommand
    (argparse parses the subcommand into a fresh namespace and copies it
    over the outer one).
    """
    flags = argparse.ArgumentParser(add_help=False)
    missing = argparse.SUPPRESS

    flags.add_argument(
        "--server",
        default=None if defaults else missing,
        help="URL of a running service (default: in-process)",
    )
    flags.add_argument(
        "--json",
        action="store_true",
        default=False if defaults else missing,
        help="emit a machine report",
    )
    flags.add_argument(
        "--certificate",
        action="store_true",
        default=False if defaults else missing,
        help="print infeasibility certificates",
    )
    flags.add_argument(
        "--decimal",
        action="store_true",
        default=False if defaults else missing,
        help="append 6-digit decimal approximations",
    )
    return flags


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags(defaults=False)
    parser = argparse.ArgumentParser(
        prog="nsbox",
        parents=[_common_flags(defaults=True)],
        description="Exact analysis of no-signaling boxes (Hardy witnesses, "
        "local/TOBL membership, games, wirings).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "check", parents=[common], help="validate a behavior and check no-signaling"
    )
    p.add_argument("file")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser(
        "hardy", parents=[common], help="evaluate the Hardy witness on a behavior"
    )
    p.add_argument("file")
    p.add_argument("--pattern", help="pattern JSON (default: canonical)")
    p.set_defaults(handler=_cmd_hardy)

    p = sub.add_parser(
        "local", parents=[common], help="decide membership in the local polytope"
    )
    p.add_argument("file")
    p.set_defaults(handler=_cmd_local)

    p = sub.add_parser(
        "tobl", parents=[common], help="decide time-ordered bilocal membership"
    )
    p.add_argument("file")
    p.add_argument("--cut", help="bipartition such as 'A|BC' (default: all three)")
    p.set_defaults(handler=_cmd_tobl)

    p = sub.add_parser(
        "gyni", parents=[common], help="evaluate the neighbour-guessing game"
    )
    p.add_argument("file")
    p.set_defaults(handler=_cmd_gyni)

    p = sub.add_parser(
        "wirings", parents=[common], help="scan all wirings of a cut for locality"
    )
    p.add_argument("file")
    p.add_argument("--cut", required=True, help="bipartition such as 'A|BC'")
    p.set_defaults(handler=_cmd_wirings)

    p = sub.add_parser(
        "optimize", parents=[common], help="maximize a pattern or expression over a set"
    )
    p.add_argument("--set", required=True, choices=["local", "tobl", "ns"])
    p.add_argument("--pattern", help="Hardy pattern JSON (default: canonical)")
    p.add_argument("--expression", help="Bell expression JSON")
    p.add_argument(
        "--cut", action="append", help="bipartition for --set tobl (repeatable)"
    )
    p.set_defaults(handler=_cmd_optimize)

    p = sub.add_parser(
        "reproduce-paper", parents=[common], help="re-derive all published claims"
    )
    p.set_defaults(handler=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    client = _ServiceClient(args.server)
    try:
        code, lines, report = args.handler(client, args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"service error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - surfaced as exit code contract
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    if args.json:
        print(json.dumps(report, indent=1))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
