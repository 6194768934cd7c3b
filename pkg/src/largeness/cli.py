"""Command-line front end: ``largeness <chain|certify|witness|graph> [flags] <file>``.

Exit codes: 0 success or pass, 2 input error, 3 inconclusive or failed
certificate, 4 resource limit.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Sequence

from .certify import chain_diagnostics, fraction_str, theorem42_check
from .chains import Chain, build_chain, exponent_sequence
from .coset_enum import DEFAULT_MAX_COSETS, CosetTable, is_normal, todd_coxeter
from .errors import PreconditionError, ResourceLimitError
from .graphs import (DEFAULT_EXACT_LIMIT, DegenerateBoundError, cayley_graph, chain_ordering,
                     exact_cheeger, exact_cutwidth, lemma34_bound, make_ordering)
from .presentation import Presentation, parse_presentation, parse_word
from .witness import DEFAULT_MAX_K_COSETS, SUCCESS, largeness_witness

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3
EXIT_RESOURCE = 4

COMMANDS = ("chain", "certify", "witness", "graph")


@dataclass
class RunConfig:
    command: str
    path: str | None
    depth: int = 3
    rule: str = "derived_power"
    max_cosets: int = DEFAULT_MAX_COSETS
    limit_exact: int = DEFAULT_EXACT_LIMIT
    level: int | None = None
    fmt: str = "json"
    subgroup: str | None = None
    modulus: int = 2
    max_k_cosets: int = DEFAULT_MAX_K_COSETS
    triple: tuple[int, int, int, int, int] | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise PreconditionError(f"unknown command {self.command!r}")
        for name in ("depth", "max_cosets", "limit_exact", "modulus", "max_k_cosets"):
            if getattr(self, name) < 1:
                raise PreconditionError(f"--{name.replace('_', '-')} must be positive")
        if self.level is not None and self.level < 1:
            raise PreconditionError("--level must be positive")
        exponent_sequence(self.rule)  # validates the rule name


def _load(path: str | None) -> Presentation:
    if path is None:
        raise PreconditionError("a presentation file is required")
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())


def _subgroup_table(p: Presentation, text: str, max_cosets: int) -> CosetTable:
    words = [parse_word(w.strip(), p.generators) for w in text.split(",") if w.strip()]
    return todd_coxeter(p, words, max_cosets)


def _chain_to(p: Presentation, cfg: RunConfig, depth: int) -> Chain:
    chain = build_chain(p, depth, cfg.rule, cfg.max_cosets)
    if len(chain) < depth:
        raise ResourceLimitError(chain.truncated or "chain stopped early")
    return chain


def _factors_text(factors) -> str:
    if factors is None:
        return "-"
    if not factors:
        return "trivial"
    runs: list[list[int]] = []
    for f in factors:
        if runs and runs[-1][0] == f:
            runs[-1][1] += 1
        else:
            runs.append([f, 1])
    return " + ".join(f"(Z/{f})^{k}" if k > 1 else f"Z/{f}" for f, k in runs)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_chain(cfg: RunConfig) -> tuple[int, str]:
    p = _load(cfg.path)
    chain = build_chain(p, cfg.depth, cfg.rule, cfg.max_cosets)
    data = chain.to_json()
    data["diagnostics"] = chain_diagnostics(chain).to_json()
    if cfg.fmt == "text":
        lines = [f"{p}  rule={cfg.rule}"]
        for lv in data["levels"]:
            lines.append(f"level {lv['level']}: index {lv['index']}  n={lv['modulus']}  "
                         f"quotient {_factors_text(lv.get('invariant_factors'))}  d={lv.get('d')}")
        if chain.truncated:
            lines.append(f"truncated: {chain.truncated}")
        return EXIT_OK, "\n".join(lines) + "\n"
    return EXIT_OK, _dump(data) + "\n"


def cmd_certify(cfg: RunConfig) -> tuple[int, str]:
    if cfg.triple is not None:
        S, L, idx_h, idx_hj, d_jk = cfg.triple
        source = {"source": "explicit"}
    elif cfg.path is not None and cfg.level is not None:
        # H = G_level, J = G_level+1, K = G_level+2; d(J/K) comes from the chain
        p = _load(cfg.path)
        chain = _chain_to(p, cfg, cfg.level + 1)
        h, j = chain[cfg.level - 1], chain[cfg.level]
        S, L = p.rank, p.relator_length_sum
        idx_h, idx_hj, d_jk = h.index, j.index // h.index, j.quotient.group.d
        source = {"source": "chain", "level": cfg.level, "rule": cfg.rule}
    else:
        raise PreconditionError("certify needs --triple S L [G:H] [H:J] d(J/K), "
                                "or a file together with --level")
    report = theorem42_check(S, L, idx_h, idx_hj, d_jk)
    code = EXIT_OK if report.passed else EXIT_INCONCLUSIVE
    data = report.to_json()
    data.update(source)
    if cfg.fmt == "text":
        thr = "vacuous" if report.threshold is None else fraction_str(report.threshold)
        return code, (f"d(J/K) = {d_jk}, threshold {thr}: "
                      f"{'PASS' if report.passed else 'FAIL'}\n")
    return code, _dump(data) + "\n"


def cmd_witness(cfg: RunConfig) -> tuple[int, str]:
    p = _load(cfg.path)
    ordering, source = None, "given"
    if cfg.subgroup is not None:
        table = _subgroup_table(p, cfg.subgroup, cfg.max_cosets)
    else:
        level = cfg.level if cfg.level is not None else 3
        chain = _chain_to(p, cfg, level)
        table = chain[level - 1].table
        if table.index > cfg.limit_exact and level >= 2:
            ordering, source = chain_ordering(chain, level - 1).ordering, "composite"
    report = largeness_witness(p, table, cfg.modulus, ordering, source, cfg.limit_exact,
                               cfg.max_k_cosets)
    code = EXIT_OK if report.verdict == SUCCESS else EXIT_INCONCLUSIVE
    if cfg.fmt == "dot":
        return code, report.to_dot()
    if cfg.fmt == "text":
        lines = [f"verdict {report.verdict}  [G:J]={report.j_index}  J/K={report.quotient}"]
        for r in report.levels:
            lines.append(f"n={r.level}: |dD|={r.boundary} one-cells={r.one_cells} "
                         f"wt(A)={r.wt_A} wt(B)={r.wt_B} chi(Y~)={r.chi_lift}")
        lines += [f"note: {n}" for n in report.notes]
        return code, "\n".join(lines) + "\n"
    return code, _dump(report.to_json()) + "\n"


def cmd_graph(cfg: RunConfig) -> tuple[int, str]:
    p = _load(cfg.path)
    constructed = None
    lemma34 = None
    if cfg.level is not None:
        chain = _chain_to(p, cfg, cfg.level)
        table = chain[cfg.level - 1].table
        if cfg.level >= 2:
            co = chain_ordering(chain, cfg.level - 1)
            constructed = co.ordering
            if co.inner is not None:
                lemma34 = {"inner_width": co.inner.ordering.width,
                           "bound": fraction_str(co.inner.bound),
                           "holds": co.inner.ordering.width <= co.inner.bound}
    else:
        table = _subgroup_table(p, cfg.subgroup or "", cfg.max_cosets)
    if not is_normal(table):
        raise PreconditionError("the subgroup is not normal, so there is no Cayley graph")
    graph = cayley_graph(table, check_normal=False)
    if cfg.fmt == "dot":
        return EXIT_OK, graph.to_dot()
    if constructed is None:
        constructed = make_ordering(graph, range(graph.vertex_count))
    data = {"vertices": graph.vertex_count, "edges": len(graph.edges),
            "constructed_ordering": constructed.to_json(),
            "constructed_width": constructed.width, "lemma34": lemma34}
    if graph.vertex_count <= cfg.limit_exact:
        w, o = exact_cutwidth(graph, cfg.limit_exact)
        data["exact_width"] = w
        data["exact_ordering"] = o.to_json()
        if graph.vertex_count >= 2:
            data["cheeger"] = fraction_str(exact_cheeger(graph, cfg.limit_exact))
    if graph.vertex_count >= 2 and lemma34 is None:
        try:
            data["width_bound_for_abelian_quotient"] = fraction_str(
                lemma34_bound(graph.vertex_count, p.rank))
        except DegenerateBoundError:
            data["width_bound_for_abelian_quotient"] = None
    if cfg.fmt == "text":
        lines = [f"{k}: {v}" for k, v in sorted(data.items()) if not k.endswith("ordering")]
        return EXIT_OK, "\n".join(lines) + "\n"
    return EXIT_OK, _dump(data) + "\n"


HANDLERS = {"chain": cmd_chain, "certify": cmd_certify, "witness": cmd_witness,
            "graph": cmd_graph}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="largeness",
                                 description="Normal subgroup chains, widths and largeness witnesses.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", nargs="?", help="presentation file (gens:/rel: lines)")
    ap.add_argument("--depth", type=int, default=3, help="number of chain levels")
    ap.add_argument("--modulus-rule", default="derived_power",
                    help="derived_power or primes_above:q")
    ap.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    ap.add_argument("--limit-exact", type=int, default=DEFAULT_EXACT_LIMIT,
                    help="largest vertex count for the exact width and Cheeger oracles")
    ap.add_argument("--level", type=int, help="chain level (1 is G itself)")
    ap.add_argument("--format", choices=("json", "dot", "text"), default="json")
    ap.add_argument("--subgroup", help="comma-separated subgroup generators; '' is trivial")
    ap.add_argument("--modulus", type=int, default=2,
                    help="exponent n in K = [J,J]J^n for the witness")
    ap.add_argument("--max-k-cosets", type=int, default=DEFAULT_MAX_K_COSETS)
    ap.add_argument("--triple", type=int, nargs=5, metavar=("S", "L", "GH", "HJ", "DJK"),
                    help="explicit certificate inputs |S| L [G:H] [H:J] d(J/K)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_intermixed_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = RunConfig(args.command, args.file, args.depth, args.modulus_rule, args.max_cosets,
                        args.limit_exact, args.level, args.format, args.subgroup, args.modulus,
                        args.max_k_cosets, tuple(args.triple) if args.triple else None)
        code, out = HANDLERS[cfg.command](cfg)
    except (PreconditionError, OSError) as exc:
        print(f"largeness: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"largeness: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
