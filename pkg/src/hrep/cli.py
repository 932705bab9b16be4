"""Command-line frontend.

Commands operate on one group, supplied either as a JSON file
({"label": ..., "cayley_table": [[...]]} or {"label": ..., "construct":
{"family": ..., "params": {...}}}) or as a builtin zoo name such as
"d8", "c12", "q8", "heis3", "es_p3_exp_p2:5", "cp:d8,q8",
"prod:d8,c3" or "ab:2,4".

Exit codes: 0 all checks pass, 1 a mathematical identity failed,
2 input/validation error, 3 an enumeration bound was exceeded.
Output is deterministic: JSON with sorted keys or TSV with sorted rows.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import abelian, transfer
from .errors import EnumerationBoundExceeded, HrepError, InvalidPrime, InvalidSpec
from .group_core import (
    FiniteGroup,
    abelian_group,
    central_product,
    construct_spec,
    cyclic,
    dihedral,
    extraspecial_p3_exp_p2,
    from_cayley_table,
    heisenberg_mod,
    quaternion8,
)
from .heisenberg import enumerate_pairs, quotient_by_kernel, two_rank_of_quotient
from .induced_det import (
    build_det_report,
    epsilon_case_report,
    find_trivializing_twist,
    isotropic_independence,
    oracle_equivalence_report,
    p3_classification,
    twist,
)
from .char_theory import linear_characters

EXIT_OK = 0
EXIT_MATH_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_BOUND_EXCEEDED = 3


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    builtin: str | None = None
    output_format: str = "json"
    seed: int = 0
    max_order: int = 256
    p: int | None = None


def parse_builtin(name: str) -> FiniteGroup:
    """Resolve a builtin zoo name."""
    name = name.strip()
    if name == "q8":
        return quaternion8()
    if name.startswith("cp:"):
        parts = name[3:].split(",")
        if len(parts) != 2:
            raise InvalidSpec(f"central product takes two factors, got {name!r}")
        return central_product(parse_builtin(parts[0]), parse_builtin(parts[1]))
    if name.startswith("prod:"):
        from .group_core import direct_product

        return direct_product(*[parse_builtin(p) for p in name[5:].split(",")])
    if name.startswith("ab:"):
        return abelian_group([int(m) for m in name[3:].split(",")])
    if name.startswith("es_p3_exp_p2:"):
        return extraspecial_p3_exp_p2(int(name.split(":")[1]))
    if name.startswith("heis"):
        return heisenberg_mod(int(name[4:]))
    if name.startswith("c") and name[1:].isdigit():
        return cyclic(int(name[1:]))
    if name.startswith("d") and name[1:].isdigit():
        return dihedral(int(name[1:]))
    raise InvalidSpec(f"unknown builtin group name {name!r}")


def load_group(config: RunConfig) -> FiniteGroup:
    if config.builtin:
        return parse_builtin(config.builtin)
    if not config.input_path:
        raise InvalidSpec("either --input or --builtin is required")
    try:
        with open(config.input_path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidSpec(f"cannot read group file: {exc}") from exc
    label = data.get("label", "G")
    if "cayley_table" in data:
        return from_cayley_table(data["cayley_table"], label=label, seed=config.seed)
    if "construct" in data:
        group = construct_spec(data["construct"])
        group.label = label
        return group
    raise InvalidSpec("group file needs a 'cayley_table' or 'construct' key")


# -- commands -------------------------------------------------------------------


def cmd_group_info(config: RunConfig) -> tuple[dict, int]:
    group = load_group(config)
    series = group.lower_central_series()
    ab_quot, _ = group.abelianization
    squares = group.power_subgroup(2)
    info = {
        "label": group.label,
        "order": group.order,
        "center": list(group.center().members),
        "commutator_subgroup": list(group.commutator_subgroup().members),
        "lower_central_series_sizes": [len(s) for s in series],
        "nilpotency_class": group.nilpotency_class(),
        "squares_subgroup": list(squares.members),
        "abelianization_factors": list(abelian.decompose(ab_quot).factors),
    }
    return info, EXIT_OK


def cmd_heisenberg(config: RunConfig) -> tuple[dict, int]:
    group = load_group(config)
    pairs = enumerate_pairs(group, max_order=config.max_order)
    rows = []
    for index, pair in enumerate(pairs):
        rows.append(
            {
                "index": index,
                "dim": pair.dim,
                "Z": list(pair.Z.members),
                "rk2": two_rank_of_quotient(pair),
                "n_isotropics": len(pair.maximal_isotropics),
                "chi": pair.chi.as_dict(),
            }
        )
    return {"group": group.label, "order": group.order, "pairs": rows}, EXIT_OK


def cmd_verify(config: RunConfig) -> tuple[dict, int]:
    """Run every applicable identity on one group; the CI gate."""
    group = load_group(config)
    checks: list[dict] = []

    def run(name, func):
        try:
            result = func()
        except AssertionError as exc:
            checks.append(
                {"check": name, "pass": False, "counterexamples": [], "stats": {"error": str(exc)}}
            )
            return
        if result is not None:
            checks.append(result.as_dict())

    instances = transfer.transfer_instances(group)
    two_step = transfer.is_two_step_nilpotent(group)
    for i, sub in enumerate(instances):
        if two_step and sub.index() % 2 == 1:
            run(f"odd_index_transfer[{i}]", lambda s=sub: transfer.check_odd_index_transfer(group, s))
        if two_step:
            run(f"correcting_cocycle[{i}]", lambda s=sub: transfer.check_correcting_cocycle(group, s))
        run(
            f"transfer_identities[{i}]",
            lambda s=sub, first=(i == 0): transfer.check_transfer_identities(
                group, s, include_furtwangler=first
            ),
        )
        run(
            f"transversal_independence[{i}]",
            lambda s=sub: transfer.transversal_independence_check(group, s, seed=config.seed),
        )

    pairs = enumerate_pairs(group, max_order=config.max_order)
    omegas = linear_characters(group)
    det_reports = []
    for j, pair in enumerate(pairs):
        run(f"oracle_equivalence[{j}]", lambda q=pair: oracle_equivalence_report(q, seed=config.seed))
        run(f"epsilon_case_split[{j}]", lambda q=pair: epsilon_case_report(q))
        reduced, _ = quotient_by_kernel(pair)
        run(f"isotropic_independence[{j}]", lambda q=reduced: isotropic_independence(q))
        run(f"twist_identity[{j}]", lambda q=pair: _twist_all(q, omegas))
        run(f"trivializing_twist[{j}]", lambda q=reduced: _twist_search(q))
        if pair.dim > 1:
            det_reports.append(build_det_report(pair).as_dict())

    all_pass = all(c["pass"] for c in checks) and all(
        r["all_agree"] for r in det_reports
    )
    report = {
        "group": group.label,
        "order": group.order,
        "n_pairs": len(pairs),
        "all_pass": all_pass,
        "checks": checks,
        "det_reports": det_reports,
    }
    return report, EXIT_OK if all_pass else EXIT_MATH_FAILURE


def _twist_all(pair, omegas) -> transfer.CheckReport:
    for omega in omegas:
        twist(pair, omega)
    return transfer.CheckReport(
        "twist_identity", True, stats={"n_characters": len(omegas), "dim": pair.dim}
    )


def _twist_search(reduced) -> transfer.CheckReport:
    omega = find_trivializing_twist(reduced)
    return transfer.CheckReport(
        "trivializing_twist",
        True,
        stats={"possible": omega is not None, "dim": reduced.dim},
    )


def cmd_p3(config: RunConfig) -> tuple[dict, int]:
    report = p3_classification(config.p)
    return report, EXIT_OK


# -- rendering ------------------------------------------------------------------


def _render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _flatten(value) -> str:
    if isinstance(value, (list, tuple)):
        return ",".join(_flatten(v) for v in value)
    if isinstance(value, dict):
        return ";".join(f"{k}={_flatten(v)}" for k, v in sorted(value.items()))
    return str(value)


def _render_tsv(report: dict) -> str:
    lines = []
    rows = report.get("rows") or report.get("pairs") or report.get("checks")
    scalar_items = sorted(
        (k, v)
        for k, v in report.items()
        if k not in ("rows", "pairs", "checks", "det_reports")
    )
    for key, value in scalar_items:
        lines.append(f"{key}\t{_flatten(value)}")
    if rows is not None:
        for row in rows:
            lines.append("\t".join(f"{k}={_flatten(v)}" for k, v in sorted(row.items())))
    return "\n".join(lines) + "\n"


_COMMANDS = {
    "group-info": cmd_group_info,
    "heisenberg": cmd_heisenberg,
    "verify": cmd_verify,
    "p3": cmd_p3,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hrep",
        description="Heisenberg representations, transfer maps, and determinant characters",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("group-info", "heisenberg", "verify"):
        cmd = sub.add_parser(name)
        source = cmd.add_mutually_exclusive_group(required=True)
        source.add_argument("--input", help="path to a JSON group file")
        source.add_argument("--builtin", help="builtin zoo name, e.g. d8 or cp:d8,q8")
        cmd.add_argument("--format", choices=("json", "tsv"), default="json")
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--max-order", type=int, default=256)
    p3_cmd = sub.add_parser("p3")
    p3_cmd.add_argument("p", type=int, help="an odd prime with p^3 <= 512")
    p3_cmd.add_argument("--format", choices=("json", "tsv"), default="json")
    p3_cmd.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        input_path=getattr(args, "input", None),
        builtin=getattr(args, "builtin", None),
        output_format=args.format,
        seed=args.seed,
        max_order=getattr(args, "max_order", 256),
        p=getattr(args, "p", None),
    )
    try:
        report, code = _COMMANDS[config.command](config)
    except EnumerationBoundExceeded as exc:
        print(f"hrep: {exc}", file=sys.stderr)
        return EXIT_BOUND_EXCEEDED
    except (InvalidSpec, InvalidPrime, HrepError) as exc:
        print(f"hrep: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    renderer = _render_tsv if config.output_format == "tsv" else _render_json
    sys.stdout.write(renderer(report))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
