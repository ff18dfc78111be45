"""Command-line front end: expansion runs, verification suites, knot export.

Exit codes: 0 success, 1 verification failure, 2 usage/resource error.
Machine output goes to --out (or stdout) and is byte-identical across
thread counts; human summaries go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from .cosbasis import MatrixPair
from .diagrams import (DEFAULT_KMAX, components_and_genus, diagram_record,
                       enumerate_matchings)
from .errors import (InvariantViolation, ResourceLimitError, StructureError,
                     ValidationError)
from .gaussian import (EntrySymbol, RegKernel, _quartic_monomials,
                       iter_pair_partitions, propagator, u_bound_check,
                       wick_moment, wick_order_quartic)
from .knots import enumerate_knot_diagrams, knot_record
from .oracle import gaussian_oracle_moment, richardson_limit
from .series import (F_of_g, assemble_Z, connected_assemble, double_limit_check,
                     extract_Flp, f_to_json, flp_to_json, formal_log, full_ln_z,
                     planar_loop_counts, series_to_json)

CLI_KMAX_CAP = DEFAULT_KMAX
SUITES = ("wick", "euler", "logcheck", "bound", "propagators")

_CONFIG_KEYS = ("kmax", "N", "d", "eps", "convention", "action",
                "threads", "out", "format")


@dataclass
class RunConfig:
    command: str
    kmax: int = 3
    N: tuple[int, ...] = (1, 2)
    d: tuple[int, ...] = (1, 2)
    eps: tuple[float, ...] = (0.1,)
    convention: str = "action"
    action: str = "standard"
    threads: int = 1
    out: str | None = None
    format: str = "json"
    suite: str | None = None

    def validate(self) -> None:
        if self.kmax < 0 or self.kmax > CLI_KMAX_CAP:
            raise ValidationError(f"kmax must be in 0..{CLI_KMAX_CAP}")
        if self.threads < 1:
            raise ValidationError("threads must be >= 1")
        if not self.N or any(n < 1 for n in self.N):
            raise ValidationError("N values must be >= 1")
        if not self.d or any(v < 1 for v in self.d):
            raise ValidationError("d values must be >= 1")
        if not self.eps or any(e <= 0 for e in self.eps):
            raise ValidationError("epsilon values must be > 0")
        if self.convention not in ("action", "paper_series"):
            raise ValidationError(f"unknown convention {self.convention!r}")
        if self.action not in ("standard", "symmetric", "wick_ordered"):
            raise ValidationError(f"unknown action {self.action!r}")
        if self.format not in ("json", "csv"):
            raise ValidationError(f"unknown format {self.format!r}")


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in str(text).split(",") if tok.strip())
    except ValueError as exc:
        raise ValidationError(f"bad integer list {text!r}") from exc


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in str(text).split(",") if tok.strip())
    except ValueError as exc:
        raise ValidationError(f"bad float list {text!r}") from exc


def load_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if getattr(args, "suite", None):
        cfg.suite = args.suite
    file_values = load_config_file(args.config) if args.config else {}
    converters = {
        "kmax": int, "N": _parse_int_list, "d": _parse_int_list,
        "eps": _parse_float_list, "convention": str, "action": str,
        "threads": int, "out": str, "format": str,
    }
    for key, conv in converters.items():
        if key in file_values:
            setattr(cfg, key, conv(file_values[key]))
        flag = getattr(args, key, None)
        if flag is not None:
            setattr(cfg, key, conv(flag))
    cfg.validate()
    return cfg


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _expand_payload(cfg: RunConfig) -> dict:
    z = assemble_Z(cfg.kmax, cfg.convention, cfg.action, threads=cfg.threads)
    lnz = formal_log(z)
    table = extract_Flp(lnz)
    f = F_of_g(table)
    payload = {
        "z_series": series_to_json(z, cfg.convention),
        "lnz_series": series_to_json(lnz, cfg.convention),
        "flp_table": flp_to_json(table),
        "f_of_g": f_to_json(f),
        "action": cfg.action,
    }
    if cfg.action == "standard":
        payload["planar_loop_counts"] = {
            str(k): v
            for k, v in planar_loop_counts(cfg.kmax, threads=cfg.threads).items()
        }
    return payload


def _payload_to_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["section", "l", "p", "k", "n_pow", "d_pow",
                     "re_num", "re_den", "im_num", "im_den"])
    for section in ("z_series", "lnz_series"):
        for t in payload[section]["terms"]:
            writer.writerow([section, "", "", t["k"], t["n_pow"], t["d_pow"],
                             t["re_num"], t["re_den"], t["im_num"], t["im_den"]])
    for entry in payload["flp_table"]["entries"]:
        for t in entry["terms"]:
            writer.writerow(["flp_table", entry["l"], entry["p"], t["k"], "", "",
                             t["re_num"], t["re_den"], t["im_num"], t["im_den"]])
    for t in payload["f_of_g"]["terms"]:
        writer.writerow(["f_of_g", "", "", t["k"], "", "",
                         t["re_num"], t["re_den"], t["im_num"], t["im_den"]])
    return buf.getvalue()


def cmd_expand(cfg: RunConfig) -> int:
    payload = _expand_payload(cfg)
    if cfg.format == "json":
        text = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        text = _payload_to_csv(payload)
    _emit(cfg, text)
    _note(f"F(g) = {payload['f_of_g']['rendered']}   "
          f"[convention={cfg.convention}, action={cfg.action}, kmax={cfg.kmax}]")
    return 0


def cmd_knots(cfg: RunConfig) -> int:
    lines = []
    per_order = {}
    for k in range(1, cfg.kmax + 1):
        records = [knot_record(k, code, coeff)
                   for code, coeff in enumerate_knot_diagrams(
                       k, cfg.convention, cfg.action)]
        records.sort(key=lambda r: (r["k"], r["code"]))
        per_order[k] = len(records)
        lines.extend(json.dumps(r, sort_keys=True, separators=(",", ":"))
                     for r in records)
    _emit(cfg, "".join(line + "\n" for line in lines))
    _note("knot diagrams per order: "
          + ", ".join(f"k={k}: {n}" for k, n in per_order.items()))
    return 0


def _entry_pool(N: int, d: int) -> list[EntrySymbol]:
    # entry indices are 1-based throughout
    return [EntrySymbol(f, mu, k, l)
            for f in ("A", "B") for mu in range(1, d + 1)
            for k in range(1, N + 1) for l in range(1, N + 1)]


def _verify_propagators(cfg: RunConfig, failures: list[str]) -> None:
    for N in cfg.N:
        for d in cfg.d:
            symbols = _entry_pool(N, d)
            for x in symbols:
                for y in symbols:
                    want = propagator(x, y, N=N, d=d)
                    got = richardson_limit(
                        lambda eps: gaussian_oracle_moment([x, y], N, d, eps))
                    if abs(got - want) >= 1e-8:
                        failures.append(
                            f"propagator N={N} d={d} {x} {y}: "
                            f"oracle {got} vs {want}")


def _verify_wick(cfg: RunConfig, failures: list[str]) -> None:
    for m in (2, 3):
        want = 1
        for j in range(2 * m - 1, 0, -2):
            want *= j
        got = sum(1 for _ in iter_pair_partitions(2 * m))
        if got != want:
            failures.append(f"pair partition count 2m={2*m}: {got} != {want}")
    rng = np.random.default_rng(20260823)
    for N in cfg.N:
        for d in cfg.d:
            pool = _entry_pool(N, d)
            picks = [list(rng.choice(len(pool), size=4)) for _ in range(8)]
            picks += [list(rng.choice(len(pool), size=6)) for _ in range(4)]
            for idxs in picks:
                entries = [pool[i] for i in idxs]
                want = wick_moment(entries)
                got = richardson_limit(
                    lambda eps: gaussian_oracle_moment(entries, N, d, eps))
                if abs(got - complex(want)) >= 1e-8:
                    failures.append(
                        f"moment N={N} d={d} {entries}: {got} vs {want}")
            c1, c2 = wick_order_quartic(N, d)
            def ordered_mean(eps, N=N, d=d, c1=c1, c2=c2):
                total = 0j
                for mono in _quartic_monomials(N, d):
                    total += gaussian_oracle_moment(list(mono), N, d, eps)
                for mu in range(1, d + 1):
                    for a in range(1, N + 1):
                        for b in range(1, N + 1):
                            pair = [EntrySymbol("A", mu, a, b),
                                    EntrySymbol("B", mu, b, a)]
                            total += c1 * gaussian_oracle_moment(pair, N, d, eps)
                return total + c2
            val = richardson_limit(ordered_mean)
            if abs(val) >= 1e-8:
                failures.append(f"E[:quartic:] N={N} d={d} = {val}")


def _verify_euler(cfg: RunConfig, failure_records: list[dict],
                  failures: list[str]) -> None:
    for k in range(1, cfg.kmax + 1):
        for p in enumerate_matchings(k, mode="ab_only"):
            try:
                rep = components_and_genus(p)
            except InvariantViolation as exc:
                failures.append(f"k={k} match={p.match}: {exc}")
                failure_records.append(diagram_record(p))
                continue
            if any(g < 0 for g in rep.genus_per_component):
                failures.append(f"k={k} match={p.match}: negative genus")
                failure_records.append(diagram_record(p))


def _verify_logcheck(cfg: RunConfig, failures: list[str]) -> None:
    for convention in ("action", "paper_series"):
        z = assemble_Z(cfg.kmax, convention, threads=cfg.threads)
        lnz = formal_log(z)
        conn = connected_assemble(cfg.kmax, convention, threads=cfg.threads)
        if lnz != conn:
            failures.append(f"linked-cluster mismatch [{convention}]")
            continue
        try:
            double_limit_check(full_ln_z(cfg.kmax, convention,
                                         threads=cfg.threads), cfg.kmax)
        except (StructureError, ValidationError) as exc:
            failures.append(f"double limit [{convention}]: {exc}")


def _verify_bound(cfg: RunConfig, failures: list[str]) -> None:
    z_samples = [0.5, 1j, 0.7 - 0.3j, -1.1 + 0.4j]
    for N in cfg.N:
        for d in cfg.d:
            for seed in (1, 2):
                fg = MatrixPair.random(N, d, seed=seed)
                for eps in cfg.eps:
                    kernel = RegKernel(min(eps, 0.5))
                    if not u_bound_check(fg, z_samples, kernel=kernel):
                        failures.append(f"bound N={N} d={d} eps={eps} seed={seed}")


def cmd_verify(cfg: RunConfig) -> int:
    failures: list[str] = []
    failure_records: list[dict] = []
    if cfg.suite == "propagators":
        _verify_propagators(cfg, failures)
    elif cfg.suite == "wick":
        _verify_wick(cfg, failures)
    elif cfg.suite == "euler":
        _verify_euler(cfg, failure_records, failures)
    elif cfg.suite == "logcheck":
        _verify_logcheck(cfg, failures)
    elif cfg.suite == "bound":
        _verify_bound(cfg, failures)
    else:
        raise ValidationError(f"unknown suite {cfg.suite!r}")
    if failures:
        for line in failures:
            _note(f"FAIL {line}")
        if failure_records and cfg.out:
            _emit(cfg, "".join(
                json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n"
                for r in failure_records))
        _note(f"verify {cfg.suite}: {len(failures)} failure(s)")
        return 1
    _note(f"verify {cfg.suite}: all checks passed")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kmax", type=int, default=None)
    parser.add_argument("--N", default=None, help="comma-separated N values")
    parser.add_argument("--d", default=None, help="comma-separated d values")
    parser.add_argument("--eps", default=None, help="comma-separated epsilons")
    parser.add_argument("--convention", choices=("action", "paper_series"),
                        default=None)
    parser.add_argument("--action",
                        choices=("standard", "symmetric", "wick_ordered"),
                        default=None)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--out", default=None)
    parser.add_argument("--format", choices=("json", "csv"), default=None)
    parser.add_argument("--config", default=None,
                        help="key=value config file; flags take precedence")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triline",
        description="Exact perturbative expansion of the two-family quartic "
                    "matrix model: series, diagram census, knot-diagram export.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_expand = sub.add_parser("expand", help="assemble Z, ln Z, the genus/link "
                                             "table, and F(g)")
    _add_common(p_expand)
    p_verify = sub.add_parser("verify", help="run an invariant suite")
    p_verify.add_argument("suite", choices=SUITES)
    _add_common(p_verify)
    p_knots = sub.add_parser("knots", help="export Gauss codes as JSON lines")
    _add_common(p_knots)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if cfg.command == "expand":
            return cmd_expand(cfg)
        if cfg.command == "verify":
            return cmd_verify(cfg)
        if cfg.command == "knots":
            return cmd_knots(cfg)
        raise ValidationError(f"unknown command {cfg.command!r}")
    except (ValidationError, ResourceLimitError, OSError) as exc:
        _note(f"error: {exc}")
        return 2
    except (StructureError, InvariantViolation) as exc:
        _note(f"invariant failure: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
