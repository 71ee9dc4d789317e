"""Command-line front end.

Each subcommand maps onto one library operation and prints a report on
stdout; positive answers ship the certificate (the cycle, the witness triple,
the counterexample sequence, the relation) so external tools can re-verify
without trusting the search.

Exit codes: 0 when the verdict holds or a certificate was found, 1 for a
definite negative verdict (including bounded searches that come back empty),
2 for precondition, budget, or input errors.

Output is UTF-8.  JSON reports have sorted keys and every report records the
seed, so a fixed command line gives byte-identical output.  File arguments
accept '-' for stdin.  --threads is accepted for interface stability; the
current operations run single-threaded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import amalgam as am
from . import experiments as ex
from . import hnn as hn
from . import ring_lab as rl
from . import sr_graph as gr
from . import star_check as sc
from . import subgroups as sg
from . import words as wd
from .elements import FreeGroupOps
from .errors import (
    BudgetExceeded,
    DisjointnessViolation,
    MalformedEdge,
    NonCompleteEComponent,
    NotFoundAtBound,
    ParseError,
    SrlabError,
)


@dataclass(frozen=True)
class RunConfig:
    """Shared run options; bounds must be positive and the seed is stamped
    into every report."""

    max_product_len: int = 6
    search_len: int = 6
    expansion_budget: int = 10_000_000
    rng_seed: int = 0
    output_format: str = "json"
    threads: int = 1

    def __post_init__(self) -> None:
        for name in ("max_product_len", "search_len", "expansion_budget", "threads"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(
                f"output_format must be json, csv, or text, got {self.output_format!r}"
            )


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _cell(value) -> str:
    if isinstance(value, (list, dict)) or value is None:
        return json.dumps(value, sort_keys=True, ensure_ascii=False)
    return value


def emit(cfg: RunConfig, report: dict, rows=None, fields=None) -> None:
    """Print one report: sorted-key JSON, a CSV table (given rows, else the
    flattened report), or sorted key: value text lines."""
    if cfg.output_format == "json":
        print(json.dumps(report, sort_keys=True, ensure_ascii=False))
        return
    if cfg.output_format == "csv":
        if rows is None:
            fields = sorted(report)
            rows = [report]
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_cell(row[k]) for k in fields])
        sys.stdout.write(buf.getvalue())
        return
    for key in sorted(report):
        print(f"{key}: {_cell(report[key])}")


# -- small parsers -----------------------------------------------------------------


def _alphabet(text: str) -> wd.Alphabet:
    symbols = tuple(s.strip() for s in text.split(",") if s.strip())
    if not symbols:
        raise ParseError(f"no generator symbols in {text!r}")
    return wd.Alphabet(symbols)


def _split_semicolons(text: str) -> list[str]:
    """Split on ';' outside braces; drop empty pieces."""
    parts: list[str] = []
    depth = 0
    cur: list[str] = []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _brace_members(text: str) -> list[str]:
    t = text.strip()
    if not (t.startswith("{") and t.endswith("}")):
        raise ParseError(f"element set must be brace-delimited, got {t!r}")
    members = [m.strip() for m in t[1:-1].split(",") if m.strip()]
    if not members:
        raise ParseError(f"empty element set in {text!r}")
    return members


def _word_set(ops: FreeGroupOps, text: str) -> sc.ElementSet:
    members = [wd.parse_word(ops.alphabet, m) for m in _brace_members(text)]
    return sc.ElementSet.of(ops, members)


def _word_list(alphabet: wd.Alphabet, text: str) -> list[wd.Word]:
    return [wd.parse_word(alphabet, t) for t in _split_semicolons(text)]


def _parse_coeff(text: str):
    text = text.strip()
    return Fraction(text) if "/" in text else int(text)


def _ring_text(ops: FreeGroupOps, text: str, char: int) -> rl.RingElement:
    """Comma-separated terms, each 'word' or 'coeff*word'; '1' is the
    identity, coefficients integer or p/q."""
    pairs = []
    for term in text.split(","):
        term = term.strip()
        if not term:
            continue
        if "*" in term:
            coeff_text, _, word_text = term.partition("*")
            coeff = _parse_coeff(coeff_text)
        else:
            coeff, word_text = 1, term
        pairs.append((wd.parse_word(ops.alphabet, word_text.strip()), coeff))
    if not pairs:
        raise ParseError(f"no terms in {text!r}")
    return rl.ring_element(ops, pairs, char)


def _mutual_report(cfg: RunConfig, verdict: sc.MutualVerdict, ops, extra: dict) -> int:
    report = {
        "seed": cfg.rng_seed,
        "status": verdict.status,
        "bound": verdict.bound,
        "witness": None
        if verdict.witness is None
        else [ops.fmt(g) for g in verdict.witness],
        **extra,
    }
    emit(cfg, report)
    return 0 if verdict.holds else 1


# -- graph -------------------------------------------------------------------------


def cmd_graph_validate(cfg: RunConfig, args) -> int:
    try:
        g = gr.graph_from_json(_read_input(args.graph))
    except (MalformedEdge, DisjointnessViolation, NonCompleteEComponent) as exc:
        emit(cfg, {"seed": cfg.rng_seed, "valid": False, "reason": str(exc)})
        return 1
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "valid": True,
            "n": g.n,
            "e_edges": len(g.e_edges),
            "f_edges": len(g.f_edges),
        },
    )
    return 0


def cmd_graph_stats(cfg: RunConfig, args) -> int:
    g = gr.graph_from_json(_read_input(args.graph))
    st = gr.stats(g)
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "n": g.n,
            "c_g": st.c_g,
            "c_h": st.c_h,
            "isolated_g": list(st.i_g),
            "isolated_h": list(st.i_h),
            "cut_vertices": list(st.cut_vertices),
        },
    )
    return 0


def cmd_graph_find_cycle(cfg: RunConfig, args) -> int:
    g = gr.graph_from_json(_read_input(args.graph))
    cert = gr.cycle_certificate(g, cfg.expansion_budget)
    emit(cfg, {"seed": cfg.rng_seed, **cert})
    return 0 if cert["sr_cycle"] else 1


def cmd_graph_criterion(cfg: RunConfig, args) -> int:
    g = gr.graph_from_json(_read_input(args.graph))
    holds = gr.complete_criterion(g)
    st = gr.stats(g)
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "criterion_holds": holds,
            "c_g": st.c_g,
            "c_h": st.c_h,
            "n": g.n,
        },
    )
    return 0 if holds else 1


# -- words -------------------------------------------------------------------------


def cmd_words_reduce(cfg: RunConfig, args) -> int:
    w = wd.parse_word(_alphabet(args.alphabet), args.word)
    emit(cfg, {"seed": cfg.rng_seed, "word": str(w), "length": len(w)})
    return 0


def cmd_words_cyclic(cfg: RunConfig, args) -> int:
    w = wd.parse_word(_alphabet(args.alphabet), args.word)
    core, conjugator = wd.cyclic_reduce(w)
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "core": str(core),
            "conjugator": str(conjugator),
            "core_length": len(core),
        },
    )
    return 0


def cmd_words_sigma(cfg: RunConfig, args) -> int:
    w = wd.parse_word(_alphabet(args.alphabet), args.word)
    total = wd.exponent_sum(w, args.generator)
    emit(cfg, {"seed": cfg.rng_seed, "generator": args.generator, "sum": total})
    return 0


# -- subgroup ----------------------------------------------------------------------


def _subgroup(alphabet: wd.Alphabet, gens_text: str) -> sg.SubgroupAutomaton:
    return sg.from_generators(alphabet, _word_list(alphabet, gens_text))


def cmd_subgroup_member(cfg: RunConfig, args) -> int:
    alphabet = _alphabet(args.alphabet)
    h = _subgroup(alphabet, args.gens)
    w = wd.parse_word(alphabet, args.word)
    coords = h.express(w)
    if coords is None:
        emit(
            cfg,
            {
                "seed": cfg.rng_seed,
                "member": False,
                "representative": str(h.coset_representative(w)),
            },
        )
        return 1
    emit(cfg, {"seed": cfg.rng_seed, "member": True, "coordinates": list(coords)})
    return 0


def cmd_subgroup_intersect(cfg: RunConfig, args) -> int:
    alphabet = _alphabet(args.alphabet)
    meet = sg.intersect(_subgroup(alphabet, args.gens), _subgroup(alphabet, args.gens2))
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "rank": meet.rank,
            "basis": [str(w) for w in meet.automaton_basis()],
        },
    )
    return 0


def cmd_subgroup_coset(cfg: RunConfig, args) -> int:
    alphabet = _alphabet(args.alphabet)
    h = _subgroup(alphabet, args.gens)
    w = wd.parse_word(alphabet, args.word)
    emit(
        cfg,
        {"seed": cfg.rng_seed, "representative": str(h.coset_representative(w))},
    )
    return 0


# -- star --------------------------------------------------------------------------


def cmd_star_closure(cfg: RunConfig, args) -> int:
    ops = FreeGroupOps(_alphabet(args.alphabet))
    closed = sc.symmetric_closure(_word_set(ops, args.set))
    emit(cfg, {"seed": cfg.rng_seed, "elements": [str(w) for w in closed.elements]})
    return 0


def cmd_star_conjugate(cfg: RunConfig, args) -> int:
    ops = FreeGroupOps(_alphabet(args.alphabet))
    x = wd.parse_word(ops.alphabet, args.by)
    conj = sc.conjugate_set(_word_set(ops, args.set), x)
    emit(cfg, {"seed": cfg.rng_seed, "elements": [str(w) for w in conj.elements]})
    return 0


def cmd_star_check(cfg: RunConfig, args) -> int:
    ops = FreeGroupOps(_alphabet(args.alphabet))
    sets = [_word_set(ops, part) for part in _split_semicolons(args.sets)]
    bound = args.max_len if args.max_len is not None else cfg.max_product_len
    verdict = sc.check_mutually_reduced(sets, bound, cfg.expansion_budget)
    return _mutual_report(cfg, verdict, ops, {"sets": len(sets)})


def cmd_star_witness_free(cfg: RunConfig, args) -> int:
    ops = FreeGroupOps(_alphabet(args.alphabet))
    m = _word_set(ops, args.set)
    xs = sc.star_witness_locally_free(m, args.x, args.y)
    fams = [sc.conjugate_set(m, x) for x in xs]
    verdict = sc.check_mutually_reduced(fams, cfg.max_product_len, cfg.expansion_budget)
    return _mutual_report(
        cfg, verdict, ops, {"witnesses": [str(x) for x in xs]}
    )


# -- hnn ---------------------------------------------------------------------------


def _hnn_presentation(args) -> hn.HnnPresentation:
    return hn.HnnPresentation.from_json(_read_input(args.presentation))


def cmd_hnn_reduce(cfg: RunConfig, args) -> int:
    p = _hnn_presentation(args)
    w = hn.britton_reduce(p, hn.parse_hnn_word(p, args.word), cfg.expansion_budget)
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "reduced": hn.format_hnn_word(p, w),
            "t_length": w.t_length,
        },
    )
    return 0


def cmd_hnn_normal(cfg: RunConfig, args) -> int:
    p = _hnn_presentation(args)
    w = hn.normal_form(p, hn.parse_hnn_word(p, args.word), cfg.expansion_budget)
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "normal_form": hn.format_hnn_word(p, w),
            "t_length": w.t_length,
        },
    )
    return 0


def cmd_hnn_identity(cfg: RunConfig, args) -> int:
    p = _hnn_presentation(args)
    w = hn.britton_reduce(p, hn.parse_hnn_word(p, args.word), cfg.expansion_budget)
    is_id = w.is_base and w.g0.is_identity
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "identity": is_id,
            "reduced": hn.format_hnn_word(p, w),
        },
    )
    return 0 if is_id else 1


def cmd_hnn_hypotheses(cfg: RunConfig, args) -> int:
    p = _hnn_presentation(args)
    g = hn.star_witness_hypotheses(p, cfg.search_len)
    outside = hn.find_word_outside(p, cfg.search_len)
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "displacing": None if g is None else str(g),
            "outside": None if outside is None else str(outside),
            "search_len": cfg.search_len,
        },
    )
    return 0 if g is not None else 1


def cmd_hnn_witness(cfg: RunConfig, args) -> int:
    p = _hnn_presentation(args)
    if args.g is not None:
        g = wd.parse_word(p.alphabet, args.g)
    else:
        g = hn.star_witness_hypotheses(p, cfg.search_len)
        if g is None:
            print(
                f"no displacing element of length <= {cfg.search_len}",
                file=sys.stderr,
            )
            return 1
    if args.h is not None:
        h = wd.parse_word(p.alphabet, args.h)
    else:
        h = hn.find_word_outside(p, cfg.search_len)
        if h is None:
            print(
                f"no element outside the associated subgroups of length <= "
                f"{cfg.search_len}",
                file=sys.stderr,
            )
            return 1
    m = hn.hnn_element_set(p, _split_semicolons(args.elements), cfg.expansion_budget)
    xs = hn.star_witness_hnn(p, m, g, h, cfg.expansion_budget)
    fams = [sc.conjugate_set(m, x) for x in xs]
    verdict = sc.check_mutually_reduced(fams, cfg.max_product_len, cfg.expansion_budget)
    return _mutual_report(
        cfg,
        verdict,
        m.ops,
        {"witnesses": [hn.format_hnn_word(p, x) for x in xs]},
    )


# -- amalgam -----------------------------------------------------------------------


def _amalgam_presentation(args) -> am.AmalgamPresentation:
    return am.AmalgamPresentation.from_json(_read_input(args.presentation))


def cmd_amalgam_reduce(cfg: RunConfig, args) -> int:
    p = _amalgam_presentation(args)
    w = am.parse_amalgam_word(p, args.word)
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "reduced": am.format_amalgam_word(w),
            "length": w.length,
            "type": am.type_of(w),
        },
    )
    return 0


def cmd_amalgam_type(cfg: RunConfig, args) -> int:
    p = _amalgam_presentation(args)
    w = am.parse_amalgam_word(p, args.word)
    emit(cfg, {"seed": cfg.rng_seed, "type": am.type_of(w), "length": w.length})
    return 0


def cmd_amalgam_dagger(cfg: RunConfig, args) -> int:
    p = _amalgam_presentation(args)
    witness = am.dagger_check(p, cfg.search_len)
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "a": str(witness.a),
            "a_star": str(witness.a_star),
            "direct_outside": witness.product_direct_outside,
            "mirrored_outside": witness.product_mirrored_outside,
        },
    )
    return 0


def cmd_amalgam_lemma45(cfg: RunConfig, args) -> int:
    from .errors import StructureMismatch

    p = _amalgam_presentation(args)
    f = am.parse_amalgam_word(p, args.f)
    a = (
        wd.parse_word(p.factor_a, args.a)
        if args.a is not None
        else am.dagger_check(p, cfg.search_len).a
    )
    b = wd.parse_word(p.factor_b, args.b) if args.b is not None else p.b_outside
    m = args.m if args.m is not None else f.length + 2
    try:
        shape = am.classify_reduced_form(p, a, b, m, f)
    except StructureMismatch as exc:
        emit(cfg, {"seed": cfg.rng_seed, "shape": None, "reason": str(exc)})
        return 1
    report = {
        "seed": cfg.rng_seed,
        "shape": shape.kind,
        "word": am.format_amalgam_word(shape.word),
        "length": shape.word.length,
        "m": m,
    }
    if shape.kind == am.SANDWICH:
        report["middle"] = am.format_amalgam_word(shape.middle)
        report["middle_length"] = shape.middle.length
    else:
        report["sign"] = shape.sign
        report["power"] = shape.power
    emit(cfg, report)
    return 0


def cmd_amalgam_witness(cfg: RunConfig, args) -> int:
    p = _amalgam_presentation(args)
    m = am.amalgam_element_set(p, _split_semicolons(args.elements))
    kwargs = {}
    if args.a is not None:
        kwargs["a"] = wd.parse_word(p.factor_a, args.a)
    if args.a_star is not None:
        kwargs["a_star"] = wd.parse_word(p.factor_a, args.a_star)
    if args.b is not None:
        kwargs["b"] = wd.parse_word(p.factor_b, args.b)
    xs = am.star_witness_amalgam(
        p, m, variant=args.variant, search_len=cfg.search_len, **kwargs
    )
    fams = [sc.conjugate_set(m, x) for x in xs]
    verdict = sc.check_mutually_reduced(fams, cfg.max_product_len, cfg.expansion_budget)
    return _mutual_report(
        cfg,
        verdict,
        m.ops,
        {"witnesses": [am.format_amalgam_word(x) for x in xs]},
    )


def cmd_amalgam_free_gens(cfg: RunConfig, args) -> int:
    p = _amalgam_presentation(args)
    elements = None
    if args.elements is not None:
        side = p.factor_b if args.kind == am.KIND_B_LARGE else p.factor_a
        elements = _word_list(side, args.elements)
    gens = am.free_pair_generators(
        p, args.kind, args.count, elements=elements, search_len=cfg.search_len
    )
    relation = am.relation_among(p, gens, cfg.max_product_len, cfg.expansion_budget)
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "kind": args.kind,
            "generators": [am.format_amalgam_word(g) for g in gens],
            "relation": None if relation is None else [list(t) for t in relation],
            "relation_bound": cfg.max_product_len,
        },
    )
    return 0 if relation is None else 1


# -- ring --------------------------------------------------------------------------


def cmd_ring_epsilon(cfg: RunConfig, args) -> int:
    ops = FreeGroupOps(_alphabet(args.alphabet))
    phi = _ring_text(ops, args.phi, args.char)
    if args.siblings is not None:
        siblings = _word_list(ops.alphabet, args.siblings)
    else:
        siblings = rl.standard_free_family(ops, 3)
    if args.witnesses is not None:
        witnesses = _word_list(ops.alphabet, args.witnesses)
    else:
        support = sc.ElementSet.of(ops, list(phi.support))
        symbols = ops.alphabet.symbols
        witnesses = sc.star_witness_locally_free(
            rl.remark_closure(support), symbols[0], symbols[1]
        )
    eps, eps1 = rl.epsilon(siblings, witnesses, phi)
    emit(
        cfg,
        {
            "seed": cfg.rng_seed,
            "support_eps": len(eps.support),
            "support_eps1": len(eps1.support),
            "eps_terms": rl.ring_terms(eps),
            "eps1_terms": rl.ring_terms(eps1),
        },
    )
    return 0


def cmd_ring_lemma32(cfg: RunConfig, args) -> int:
    ops = FreeGroupOps(_alphabet(args.alphabet))
    s1, s2, s3 = (_word_set(ops, t) for t in (args.s1, args.s2, args.s3))
    translators = _word_list(ops.alphabet, args.t)
    table = rl.right_translation_table(
        ops, s1, s2, s3, translators, cfg.max_product_len, cfg.expansion_budget
    )
    report = {"seed": cfg.rng_seed, **rl.table_report(table, len(translators))}
    emit(cfg, report)
    return 0 if report["holds"] else 1


def cmd_ring_lemma33(cfg: RunConfig, args) -> int:
    ops = FreeGroupOps(_alphabet(args.alphabet))
    s_list = [
        [wd.parse_word(ops.alphabet, m) for m in _brace_members(part)]
        for part in _split_semicolons(args.sets)
    ]
    if args.triples is not None:
        x_list = []
        for part in _split_semicolons(args.triples):
            triple = [wd.parse_word(ops.alphabet, m) for m in part.split(",")]
            x_list.append(tuple(triple))
    else:
        fam = rl.standard_free_family(ops, 3 * len(s_list))
        x_list = [tuple(fam[3 * i : 3 * i + 3]) for i in range(len(s_list))]
    table = rl.left_translation_table(
        ops, s_list, x_list, cfg.max_product_len, cfg.expansion_budget
    )
    threshold = sum(len(s) for s in s_list)
    report = {"seed": cfg.rng_seed, **rl.table_report(table, threshold)}
    emit(cfg, report)
    return 0 if report["holds"] else 1


def cmd_ring_support_bound(cfg: RunConfig, args) -> int:
    ops = FreeGroupOps(_alphabet(args.alphabet))
    instances = []
    for text in args.instance:
        fields = [f.strip() for f in text.split("|")]
        if len(fields) != 3:
            raise ParseError(
                f"instance must be 'label | phi-terms | u-terms', got {text!r}"
            )
        label = wd.parse_word(ops.alphabet, fields[0])
        instances.append(
            (
                label,
                _ring_text(ops, fields[1], args.char),
                _ring_text(ops, fields[2], args.char),
            )
        )
    report = rl.support_bound_experiment(
        instances,
        max_product_len=cfg.max_product_len,
        expansion_budget=cfg.expansion_budget,
    )
    report = {"seed": cfg.rng_seed, **report}
    row = rl.support_csv_row(report)
    emit(cfg, report, rows=[row], fields=list(rl.SUPPORT_CSV_FIELDS))
    return 0 if report["holds"] else 1


# -- experiment --------------------------------------------------------------------


def cmd_experiment_batch(cfg: RunConfig, args) -> int:
    report = ex.batch_report(seed=cfg.rng_seed, scale=args.scale)
    rows = [
        {"section": name, "holds": section["holds"]}
        for name, section in sorted(report["sections"].items())
    ]
    emit(cfg, report, rows=rows, fields=["section", "holds"])
    return 0 if report["holds"] else 1


# -- parser wiring -----------------------------------------------------------------


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--max-product-len",
        type=int,
        default=6,
        help="product-length bound for mutual-reduction and table checks",
    )
    common.add_argument(
        "--search-len", type=int, default=6, help="word-length bound for searches"
    )
    common.add_argument(
        "--expansion-budget",
        type=int,
        default=10_000_000,
        help="node-expansion budget for bounded searches",
    )
    common.add_argument("--seed", type=int, default=0, help="seed recorded in reports")
    common.add_argument(
        "--output-format",
        choices=("json", "csv", "text"),
        default="json",
        help="report format on stdout",
    )
    common.add_argument(
        "--threads",
        type=int,
        default=1,
        help="accepted for interface stability; operations run single-threaded",
    )
    return common


def _alphabet_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--alphabet",
        default="a,b",
        help="comma-separated generator symbols (default a,b)",
    )


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="srlab",
        description="Alternating-cycle graphs, free-group word calculus, "
        "bounded mutual-reduction certificates, and group-ring support "
        "experiments.",
    )
    top = parser.add_subparsers(dest="command", required=True)

    graph = top.add_parser("graph", help="two-coloured graph checks").add_subparsers(
        dest="subcommand", required=True
    )
    p = graph.add_parser("validate", parents=[common], help="check the graph invariants")
    p.add_argument("graph", help="graph JSON file or '-'")
    p.set_defaults(handler=cmd_graph_validate)
    p = graph.add_parser("stats", parents=[common], help="component counts and witnesses")
    p.add_argument("graph")
    p.set_defaults(handler=cmd_graph_stats)
    p = graph.add_parser("find-cycle", parents=[common], help="alternating-cycle certificate")
    p.add_argument("graph")
    p.set_defaults(handler=cmd_graph_find_cycle)
    p = graph.add_parser("criterion", parents=[common], help="component-count criterion")
    p.add_argument("graph")
    p.set_defaults(handler=cmd_graph_criterion)

    words = top.add_parser("words", help="free-group word calculus").add_subparsers(
        dest="subcommand", required=True
    )
    p = words.add_parser("reduce", parents=[common], help="freely reduce a word")
    _alphabet_option(p)
    p.add_argument("word")
    p.set_defaults(handler=cmd_words_reduce)
    p = words.add_parser("cyclic", parents=[common], help="cyclic reduction")
    _alphabet_option(p)
    p.add_argument("word")
    p.set_defaults(handler=cmd_words_cyclic)
    p = words.add_parser("sigma", parents=[common], help="exponent sum of a generator")
    _alphabet_option(p)
    p.add_argument("word")
    p.add_argument("--generator", required=True, help="generator symbol to count")
    p.set_defaults(handler=cmd_words_sigma)

    subgroup = top.add_parser("subgroup", help="finitely generated subgroups").add_subparsers(
        dest="subcommand", required=True
    )
    p = subgroup.add_parser("member", parents=[common], help="membership with coordinates")
    _alphabet_option(p)
    p.add_argument("--gens", required=True, help="semicolon-separated generator words")
    p.add_argument("word")
    p.set_defaults(handler=cmd_subgroup_member)
    p = subgroup.add_parser("intersect", parents=[common], help="intersection basis")
    _alphabet_option(p)
    p.add_argument("--gens", required=True)
    p.add_argument("--gens2", required=True)
    p.set_defaults(handler=cmd_subgroup_intersect)
    p = subgroup.add_parser("coset", parents=[common], help="canonical coset representative")
    _alphabet_option(p)
    p.add_argument("--gens", required=True)
    p.add_argument("word")
    p.set_defaults(handler=cmd_subgroup_coset)

    star = top.add_parser("star", help="mutual-reduction checks and witnesses").add_subparsers(
        dest="subcommand", required=True
    )
    p = star.add_parser("closure", parents=[common], help="symmetric closure of a set")
    _alphabet_option(p)
    p.add_argument("--set", required=True, help="brace set, e.g. '{a, b^-1}'")
    p.set_defaults(handler=cmd_star_closure)
    p = star.add_parser("conjugate", parents=[common], help="conjugate a set")
    _alphabet_option(p)
    p.add_argument("--set", required=True)
    p.add_argument("--by", required=True, help="conjugator word")
    p.set_defaults(handler=cmd_star_conjugate)
    p = star.add_parser("check", parents=[common], help="bounded mutual-reduction check")
    _alphabet_option(p)
    p.add_argument("--sets", required=True, help="semicolon-separated brace sets")
    p.add_argument("--max-len", type=int, default=None, help="product-length bound")
    p.set_defaults(handler=cmd_star_check)
    p = star.add_parser(
        "witness-free", parents=[common], help="conjugator triple over a free ambient"
    )
    _alphabet_option(p)
    p.add_argument("--set", required=True)
    p.add_argument("--x", default="a", help="wing generator (default a)")
    p.add_argument("--y", default="b", help="middle generator (default b)")
    p.set_defaults(handler=cmd_star_witness_free)

    hnn = top.add_parser("hnn", help="stable-letter extensions").add_subparsers(
        dest="subcommand", required=True
    )
    p = hnn.add_parser("reduce", parents=[common], help="pinch-free reduction")
    p.add_argument("presentation", help="presentation JSON file or '-'")
    p.add_argument("word")
    p.set_defaults(handler=cmd_hnn_reduce)
    p = hnn.add_parser("normal", parents=[common], help="coset normal form")
    p.add_argument("presentation")
    p.add_argument("word")
    p.set_defaults(handler=cmd_hnn_normal)
    p = hnn.add_parser("identity", parents=[common], help="identity test")
    p.add_argument("presentation")
    p.add_argument("word")
    p.set_defaults(handler=cmd_hnn_identity)
    p = hnn.add_parser(
        "hypotheses", parents=[common], help="displacing-element certificate"
    )
    p.add_argument("presentation")
    p.set_defaults(handler=cmd_hnn_hypotheses)
    p = hnn.add_parser("witness", parents=[common], help="conjugator triple, verified")
    p.add_argument("presentation")
    p.add_argument(
        "--elements", required=True, help="semicolon-separated member words"
    )
    p.add_argument("--g", default=None, help="displacing element (default: searched)")
    p.add_argument("--h", default=None, help="outside element (default: searched)")
    p.set_defaults(handler=cmd_hnn_witness)

    amalgam = top.add_parser("amalgam", help="amalgamated products").add_subparsers(
        dest="subcommand", required=True
    )
    p = amalgam.add_parser("reduce", parents=[common], help="alternating normal form")
    p.add_argument("presentation")
    p.add_argument("word", help="e.g. 'A: a h | B: b'")
    p.set_defaults(handler=cmd_amalgam_reduce)
    p = amalgam.add_parser("type", parents=[common], help="boundary-tag type")
    p.add_argument("presentation")
    p.add_argument("word")
    p.set_defaults(handler=cmd_amalgam_type)
    p = amalgam.add_parser("dagger", parents=[common], help="displacing-pair certificate")
    p.add_argument("presentation")
    p.set_defaults(handler=cmd_amalgam_dagger)
    p = amalgam.add_parser(
        "lemma45", parents=[common], help="sandwich-or-power classification"
    )
    p.add_argument("presentation")
    p.add_argument("--f", required=True, help="middle element")
    p.add_argument("--m", type=int, default=None, help="wing power (default l(f)+2)")
    p.add_argument("--a", default=None, help="displacing element (default: searched)")
    p.add_argument("--b", default=None, help="second-factor element (default: stored)")
    p.set_defaults(handler=cmd_amalgam_lemma45)
    p = amalgam.add_parser("witness", parents=[common], help="conjugator triple, verified")
    p.add_argument("presentation")
    p.add_argument("--elements", required=True)
    p.add_argument("--variant", choices=("direct", "mirrored"), default="direct")
    p.add_argument("--a", default=None)
    p.add_argument("--a-star", dest="a_star", default=None)
    p.add_argument("--b", default=None)
    p.set_defaults(handler=cmd_amalgam_witness)
    p = amalgam.add_parser(
        "free-gens", parents=[common], help="stock free family with relation search"
    )
    p.add_argument("presentation")
    p.add_argument(
        "--kind",
        choices=(am.KIND_A_LARGE, am.KIND_B_LARGE, am.KIND_H_LARGE),
        required=True,
    )
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--elements", default=None, help="explicit seed elements")
    p.set_defaults(handler=cmd_amalgam_free_gens)

    ring = top.add_parser("ring", help="group-ring support experiments").add_subparsers(
        dest="subcommand", required=True
    )
    p = ring.add_parser("epsilon", parents=[common], help="sibling-translation element")
    _alphabet_option(p)
    p.add_argument(
        "--phi", required=True, help="terms, e.g. 'b, 2*a b' ('1' is the identity)"
    )
    p.add_argument("--char", type=int, default=0)
    p.add_argument("--siblings", default=None, help="three words (default: standard family)")
    p.add_argument("--witnesses", default=None, help="three words (default: constructed)")
    p.set_defaults(handler=cmd_ring_epsilon)
    p = ring.add_parser("lemma32", parents=[common], help="right-translation counting table")
    _alphabet_option(p)
    p.add_argument("--s1", required=True, help="brace set")
    p.add_argument("--s2", required=True)
    p.add_argument("--s3", required=True)
    p.add_argument("--t", required=True, help="semicolon-separated translators")
    p.set_defaults(handler=cmd_ring_lemma32)
    p = ring.add_parser("lemma33", parents=[common], help="left-translation counting table")
    _alphabet_option(p)
    p.add_argument("--sets", required=True, help="semicolon-separated brace sets")
    p.add_argument(
        "--triples",
        default=None,
        help="semicolon-separated comma triples (default: standard family)",
    )
    p.set_defaults(handler=cmd_ring_lemma33)
    p = ring.add_parser("support-bound", parents=[common], help="support-size experiment")
    _alphabet_option(p)
    p.add_argument(
        "--instance",
        action="append",
        required=True,
        help="'label | phi-terms | u-terms', repeatable",
    )
    p.add_argument("--char", type=int, default=0)
    p.set_defaults(handler=cmd_ring_support_bound)

    experiment = top.add_parser("experiment", help="batch experiment drivers").add_subparsers(
        dest="subcommand", required=True
    )
    p = experiment.add_parser("batch", parents=[common], help="run every driver once")
    p.add_argument("--scale", choices=("quick", "full"), default="quick")
    p.set_defaults(handler=cmd_experiment_batch)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            max_product_len=args.max_product_len,
            search_len=args.search_len,
            expansion_budget=args.expansion_budget,
            rng_seed=args.seed,
            output_format=args.output_format,
            threads=args.threads,
        )
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.handler(cfg, args)
    except NotFoundAtBound as exc:
        print(f"not found at bound: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(
            f"parse error: line {exc.lineno} column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return 2
    except (SrlabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
