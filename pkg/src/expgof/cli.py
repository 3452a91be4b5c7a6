"""Command-line front end.

A thin client over the HTTP service: requests are sent either to a
running server (``--server http://host:port``) or to the app mounted
in-process (the default, no network involved).

Exit codes: 0 completed (whatever the test decision), 2 input error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .dataio import DataParseError, parse_data_file

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _client(server):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _load_sample_args(args):
    """Return the data/dataset part of a request body."""
    if args.data in ("pyke1965", "barlow1975"):
        return {"dataset": args.data}
    try:
        values = parse_data_file(args.data)
    except DataParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)
    return {"data": [float(v) for v in values]}


def _post(client, path, body):
    resp = client.post(path, json=body)
    if resp.status_code >= 500:
        print(f"error: {resp.json().get('detail', resp.text)}", file=sys.stderr)
        raise SystemExit(EXIT_NUMERIC)
    if resp.status_code >= 400:
        detail = resp.json().get("detail", resp.text)
        print(f"error: {detail}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)
    return resp.json()


def _emit_rows(rows, fieldnames, fmt):
    if fmt == "json":
        print(json.dumps(rows, indent=2))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k) for k in fieldnames})
        sys.stdout.write(buf.getvalue())
    else:
        widths = {k: max(len(k), *(len(str(r.get(k))) for r in rows)) for k in fieldnames}
        print("  ".join(k.ljust(widths[k]) for k in fieldnames))
        for row in rows:
            print("  ".join(str(row.get(k)).ljust(widths[k]) for k in fieldnames))


def _parse_a(text):
    if text == "auto":
        return "auto"
    try:
        a = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("a must be a positive number or 'auto'")
    if a <= 0:
        raise argparse.ArgumentTypeError("a must be positive")
    return a


def _grid(text):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="expgof",
        description="Weighted-L2 exponentiality test toolkit",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", default=None,
                        help="URL of a running service; default runs in-process")
    common.add_argument("--format", choices=("json", "csv", "text"),
                        default="text", help="output format")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=lambda **kw: argparse.ArgumentParser(
                                    parents=[common], **kw))

    def common_mc(p):
        p.add_argument("--alpha", type=float, default=0.05)
        p.add_argument("--N", type=int, default=10000,
                       help="Monte Carlo replicates")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("test", help="run the exponentiality test on data")
    p.add_argument("--data", required=True,
                   help="path to a data file, or embedded dataset id "
                        "(pyke1965, barlow1975)")
    p.add_argument("--a", type=_parse_a, default=1.0,
                   help="tuning parameter, or 'auto' for data-driven choice")
    p.add_argument("--grid", type=_grid, default=[0.5, 1, 2, 5],
                   help="comma-separated grid for a='auto'")
    p.add_argument("--B", type=int, default=1000, help="bootstrap resamples")
    p.add_argument("--fast", action="store_true",
                   help="desk-scale preset (N=2000)")
    common_mc(p)

    p = sub.add_parser("select-a", help="data-driven tuning parameter choice")
    p.add_argument("--data", required=True)
    p.add_argument("--grid", type=_grid, default=[0.5, 1, 2, 5])
    p.add_argument("--B", type=int, default=1000)
    common_mc(p)

    p = sub.add_parser("critical-values", help="Monte Carlo critical values")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=_grid, default=[0.5, 1, 2, 5],
                   help="comma-separated tuning parameters")
    common_mc(p)

    p = sub.add_parser("power", help="empirical power study")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--a", type=_grid, default=[0.5, 1, 2, 5])
    p.add_argument("--alt", type=lambda s: s.split(","), default=None,
                   help="comma-separated alternative labels, e.g. W(1.4),HN,U")
    p.add_argument("--data-driven", action="store_true",
                   help="select a per replicate via the bootstrap algorithm")
    p.add_argument("--B", type=int, default=500)
    common_mc(p)

    p = sub.add_parser("eigen", help="leading eigenvalue of the limit operator")
    p.add_argument("--grid", type=_grid, default=[0.5, 1, 2, 5])
    p.add_argument("--m", type=int, default=4500, help="grid resolution")
    p.add_argument("--B", type=float, default=10.0, help="truncation point")

    p = sub.add_parser("efficiency", help="local Bahadur efficiency vs LRT")
    p.add_argument("--family", type=lambda s: s.split(","),
                   default=["weibull", "gamma", "lfr", "emnw"])
    p.add_argument("--grid", type=_grid, default=[0.5, 1, 2, 5])
    p.add_argument("--beta", type=float, default=3.0)
    p.add_argument("--m", type=int, default=1500,
                   help="eigenvalue grid resolution")
    return parser


def _cmd_test(client, args):
    body = _load_sample_args(args)
    if args.fast:
        args.N = min(args.N, 2000)
    body.update(a=args.a, alpha=args.alpha, N=args.N, B=args.B,
                grid=args.grid, seed=args.seed)
    if body.get("data") is not None and len(body["data"]) < 3:
        out = _post(client, "/statistic", body)
        print(f"statistic M(n={out['n']}, a={out['a']:g}) = {out['statistic']:.6g}")
        print("warning: n < 3, inference refused (statistic only)")
        return
    out = _post(client, "/test", body)
    if args.format == "json":
        print(json.dumps(out, indent=2))
        return
    decision = "reject exponentiality" if out["reject"] else "fail to reject exponentiality"
    rows = [out]
    fields = ["statistic", "a", "n", "critical_value", "p_value", "reject",
              "alpha", "N", "seed"]
    if args.format == "csv":
        _emit_rows(rows, fields, "csv")
    else:
        print(f"statistic M(n={out['n']}, a={out['a']:g}) = {out['statistic']:.6g}"
              + ("  [a chosen data-driven]" if out["a_selected"] else ""))
        print(f"critical value (alpha={out['alpha']:g}, N={out['N']}) = "
              f"{out['critical_value']:.6g}")
        print(f"p-value = {out['p_value']:.4g}")
        print(f"decision: {decision}")
        print(f"reproduce with: seed={out['seed']}, N={out['N']}, a={out['a']:g}")


def _cmd_select_a(client, args):
    body = _load_sample_args(args)
    body.update(grid=args.grid, B=args.B, alpha=args.alpha, N=args.N,
                seed=args.seed)
    out = _post(client, "/select-a", body)
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        print(f"selected a = {out['a']:g}")


def _cmd_critical_values(client, args):
    rows = []
    for a in args.a:
        out = _post(client, "/critical-value",
                    {"n": args.n, "a": a, "alpha": args.alpha, "N": args.N,
                     "seed": args.seed})
        rows.append(out)
    _emit_rows(rows, ["n", "a", "alpha", "N", "seed", "critical_value"],
               args.format)


def _cmd_power(client, args):
    body = {"n": args.n, "a": args.a, "alpha": args.alpha, "N": args.N,
            "seed": args.seed, "data_driven": args.data_driven, "B": args.B}
    if args.alt:
        body["alternatives"] = args.alt
    out = _post(client, "/power", body)
    cells = out["cells"]
    if args.data_driven:
        for cell in cells:
            freq = cell.pop("selection_frequency") or {}
            for a, f in freq.items():
                cell[f"freq_a={a}"] = round(f, 4)
            cell.pop("a", None)
        fields = sorted({k for c in cells for k in c}, key=lambda k: (k != "alternative", k))
    else:
        fields = ["alternative", "n", "a", "power"]
    _emit_rows(cells, fields, args.format if args.format != "text" else "text")


def _cmd_eigen(client, args):
    out = _post(client, "/eigen", {"a": args.grid, "m": args.m, "B": args.B})
    _emit_rows(out, ["a", "delta1", "iterations", "residual"], args.format)


def _cmd_efficiency(client, args):
    out = _post(client, "/efficiency",
                {"families": args.family, "a": args.grid, "beta": args.beta,
                 "m": args.m})
    _emit_rows(out, ["family", "a", "efficiency"], args.format)


COMMANDS = {
    "test": _cmd_test,
    "select-a": _cmd_select_a,
    "critical-values": _cmd_critical_values,
    "power": _cmd_power,
    "eigen": _cmd_eigen,
    "efficiency": _cmd_efficiency,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    client = _client(args.server)
    try:
        COMMANDS[args.command](client, args)
    finally:
        client.close()
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
