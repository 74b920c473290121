"""Command-line interface.

Subcommands: ``validate`` (deck files), ``exact`` (rational queries),
``simulate`` (seeded Monte Carlo), ``formula`` (bare retrodiction
arithmetic), ``quantum`` (states, ABL rules, slit geometry), and
``scenario`` (the named worked examples).

Exit codes: 0 success (all claims passing), 1 a scenario claim failed,
2 usage or validation error.  Output is deterministic for fixed arguments
and seed; rationals print as ``num/den``, floats with 12 significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .deck import format_cards
from .deckfile import load_deck
from .errors import ThreeBoxError
from .exact import (
    OutcomeAt,
    acceptance_probability,
    experiment_from_options,
    format_fraction,
    parse_outcome_reference,
    probability,
    retrodict_exact,
    tree_report,
)
from .formulas import RetrodictionInputs, retrodict_complete, retrodict_partial
from .montecarlo import RunConfig, simulate
from .scenarios import DEFAULT_SEED, DEFAULT_TRIALS, SCENARIOS, run_scenario
from . import quantum


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _emit(report: dict, args: argparse.Namespace, text: str | None = None) -> None:
    """Print a report as JSON, CSV, or plain text."""
    if getattr(args, "json", False):
        print(json.dumps(report, indent=2))
    elif getattr(args, "csv", False):
        print(_to_csv(report), end="")
    else:
        print(text if text is not None else json.dumps(report, indent=2))


def _to_csv(report: dict) -> str:
    """Flatten a report's tabular part into CSV rows."""
    lines = []
    if "leaves" in report:
        lines.append("outcomes,probability")
        for leaf in report["leaves"]:
            lines.append(f"{' '.join(leaf['outcomes'])},{leaf['probability']}")
    elif "sequences" in report:
        lines.append("outcomes,count,frequency,standard_error")
        for row in report["sequences"]:
            lines.append(
                f"{' '.join(row['outcomes'])},{row['count']},{row['frequency']},{row['standard_error']}"
            )
    elif "claims" in report:
        lines.append("description,expected,mode,computed,passed")
        for claim in report["claims"]:
            computed = "; ".join(f"{k}={v}" for k, v in claim["computed"].items())
            lines.append(
                f"\"{claim['description']}\",\"{claim['expected']}\",{claim['mode']},\"{computed}\",{claim['passed']}"
            )
    else:
        for key, value in report.items():
            lines.append(f"{key},{value}")
    return "\n".join(lines) + "\n"


def _add_format_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", help="emit a JSON report")
    group.add_argument("--csv", action="store_true", help="emit CSV rows")


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as error:
        raise ThreeBoxError(f"{text!r} is not a rational number: {error}") from None


def _parse_state(text: str) -> quantum.QState:
    try:
        amplitudes = [complex(part.strip().replace("i", "j")) for part in text.split(",")]
    except ValueError as error:
        raise ThreeBoxError(f"bad amplitude list {text!r}: {error}") from None
    return quantum.QState.normalized(amplitudes)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> int:
    deck = load_deck(args.deck)
    report = {
        "valid": True,
        "variables": [
            {"name": deck.face.name, "values": list(deck.face.labels)},
            {"name": deck.suit.name, "values": list(deck.suit.labels)},
        ],
        "cards": deck.size,
        "values_per_variable": deck.values_per_variable,
        "copies_per_value": deck.copies_per_value,
        "deck": format_cards(deck.cards),
    }
    text = (
        f"valid deck: {{{report['deck']}}} "
        f"({deck.size} cards, {deck.values_per_variable} values per variable, "
        f"{deck.copies_per_value} copies per value)"
    )
    _emit(report, args, text)
    return 0


def _build_experiment(args: argparse.Namespace):
    deck = load_deck(args.deck)
    return deck, experiment_from_options(deck, args.prepare, args.observe or [], args.postselect)


def _cmd_exact(args: argparse.Namespace) -> int:
    deck, experiment = _build_experiment(args)
    if args.query is not None:
        ordinal, outcome = parse_outcome_reference(deck, experiment.manifestations, args.query)
        if experiment.postselection is not None:
            value = retrodict_exact(experiment, ordinal, outcome)
            kind = "retrodiction"
        else:
            value = probability(experiment, OutcomeAt(ordinal, outcome))
            kind = "probability"
        report = {
            "query": {"ordinal": ordinal, "outcome": str(outcome)},
            "kind": kind,
            "value": format_fraction(value),
        }
        _emit(report, args, format_fraction(value))
        return 0
    report = tree_report(experiment)
    if experiment.postselection is not None:
        report["acceptance_probability"] = format_fraction(acceptance_probability(experiment))
    lines = [f"{' '.join(leaf['outcomes']) or '(no events)'}: {leaf['probability']}" for leaf in report["leaves"]]
    if "acceptance_probability" in report:
        lines.append(f"acceptance: {report['acceptance_probability']}")
    _emit(report, args, "\n".join(lines))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    deck, experiment = _build_experiment(args)
    table = simulate(RunConfig(experiment, args.trials, args.seed))
    report = table.to_dict()
    if args.query is not None:
        ordinal, outcome = parse_outcome_reference(deck, experiment.manifestations, args.query)
        if experiment.postselection is not None:
            estimate = table.retrodiction(ordinal, outcome)
            report["retrodiction"] = {
                "outcome": str(outcome),
                "estimate": _fmt(estimate.estimate),
                "standard_error": _fmt(estimate.standard_error),
                "accepted": estimate.accepted,
            }
        else:
            frequency = table.marginal_frequency(ordinal, outcome)
            report["marginal"] = {"outcome": str(outcome), "frequency": _fmt(frequency)}
    lines = [
        f"{' '.join(row['outcomes'])}: {row['count']} ({row['frequency']})"
        for row in report["sequences"]
    ]
    if "acceptance_rate" in report:
        lines.append(f"accepted: {report['accepted']} (rate {report['acceptance_rate']})")
    if "retrodiction" in report:
        r = report["retrodiction"]
        lines.append(f"retrodiction of {r['outcome']}: {r['estimate']} ± {r['standard_error']}")
    if "marginal" in report:
        lines.append(f"frequency of {report['marginal']['outcome']}: {report['marginal']['frequency']}")
    _emit(report, args, "\n".join(lines))
    return 0


def _cmd_formula(args: argparse.Namespace) -> int:
    if args.kind == "partial":
        value = retrodict_partial(
            RetrodictionInputs(
                likelihood=_parse_fraction(args.likelihood),
                prior=_parse_fraction(args.prior),
                likelihood_negation=_parse_fraction(args.likelihood_negation),
                prior_negation=_parse_fraction(args.prior_negation),
            )
        )
    else:
        likelihoods = [_parse_fraction(x) for x in args.likelihoods.split(",")]
        priors = [_parse_fraction(x) for x in args.priors.split(",")]
        value = retrodict_complete(likelihoods, priors, args.index)
    _emit({"kind": args.kind, "value": format_fraction(value)}, args, format_fraction(value))
    return 0


def _cmd_quantum(args: argparse.Namespace) -> int:
    if args.operation in ("abl-complete", "abl-partial"):
        state = _parse_state(args.state)
        post = _parse_state(args.post)
        basis = (
            [quantum.QState.basis_state(state.dimension, k) for k in range(state.dimension)]
            if args.basis is None
            else [_parse_state(part) for part in args.basis.split(";")]
        )
        fn = quantum.abl_complete if args.operation == "abl-complete" else quantum.abl_partial
        value = fn(state, basis, args.index, post)
        report = {"operation": args.operation, "index": args.index, "value": _fmt(value)}
        _emit(report, args, _fmt(value))
    elif args.operation == "born":
        value = quantum.born_probability(_parse_state(args.state), _parse_state(args.post))
        _emit({"operation": "born", "value": _fmt(value)}, args, _fmt(value))
    elif args.operation == "condition":
        state = _parse_state(args.state)
        post = _parse_state(args.post)
        basis = [quantum.QState.basis_state(3, k) for k in range(3)]
        result = quantum.threebox_condition_check(state, post, basis)
        _emit({"operation": "condition", "value": result}, args, str(result).lower())
    elif args.operation == "slits":
        geometry = quantum.three_slit_design(args.separation, args.wavelength)
        report = {
            "operation": "slits",
            "separation": _fmt(geometry.separation),
            "wavelength": _fmt(geometry.wavelength),
            "distance": _fmt(geometry.distance),
            "amplitude_pattern": [
                _fmt(x) for x in (geometry.detector_state().amplitudes.real.round(12))
            ],
        }
        _emit(report, args, f"detector distance: {_fmt(geometry.distance)}")
    else:  # aad
        analysis = quantum.aad_analysis(complex(args.alpha), complex(args.beta))
        report = {
            "operation": "aad",
            "partial": _fmt(analysis.partial_result),
            "complete": _fmt(analysis.complete_result),
        }
        _emit(report, args, f"partial: {report['partial']}\ncomplete: {report['complete']}")
    return 0


def _cmd_scenario(args: argparse.Namespace) -> int:
    report = run_scenario(args.name, trials=args.trials, seed=args.seed)
    payload = report.to_dict()
    lines = [f"scenario {report.name}: {'PASS' if report.passed else 'FAIL'}"]
    for claim in report.claims:
        status = "PASS" if claim.passed else "FAIL"
        computed = "; ".join(f"{route}={value}" for route, value in claim.computed.items())
        lines.append(f"  [{status}] {claim.description} | expected {claim.expected} | {computed}")
    _emit(payload, args, "\n".join(lines))
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threebox",
        description="Card-deck and quantum retrodiction engines for pre/post-selected runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a deck schema file")
    p.add_argument("--deck", required=True, help="deck schema file")
    _add_format_flags(p)
    p.set_defaults(handler=_cmd_validate)

    for name, handler, help_text in (
        ("exact", _cmd_exact, "exact rational probabilities via full enumeration"),
        ("simulate", _cmd_simulate, "seeded Monte Carlo frequencies"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--deck", required=True, help="deck schema file")
        p.add_argument("--prepare", required=True, metavar="VAR=VALUE", help="preparation, e.g. Face=Q or Suit=~S")
        p.add_argument(
            "--observe",
            action="append",
            metavar="VAR[?VALUE]",
            help="observation event, in order; VAR alone is complete, VAR?VALUE partial (repeatable)",
        )
        p.add_argument("--postselect", metavar="[ORD:]VAR=VALUE", help="accept only runs with this outcome")
        p.add_argument("--query", metavar="[ORD:]VAR=VALUE", help="outcome to score (retrodiction if postselecting)")
        if name == "simulate":
            p.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="number of trials")
            p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="64-bit stream seed")
        _add_format_flags(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("formula", help="retrodiction formulas on bare rationals")
    formula_sub = p.add_subparsers(dest="kind", required=True)
    fp = formula_sub.add_parser("partial", help="value-or-not retrodiction")
    fp.add_argument("--likelihood", required=True, help="Pr[final | value], e.g. 1/2")
    fp.add_argument("--prior", required=True, help="Pr[value]")
    fp.add_argument("--likelihood-negation", required=True, dest="likelihood_negation")
    fp.add_argument("--prior-negation", required=True, dest="prior_negation")
    _add_format_flags(fp)
    fp.set_defaults(handler=_cmd_formula)
    fc = formula_sub.add_parser("complete", help="complete-observation retrodiction")
    fc.add_argument("--likelihoods", required=True, help="comma-separated rationals")
    fc.add_argument("--priors", required=True, help="comma-separated rationals summing to 1")
    fc.add_argument("--index", type=int, required=True, help="0-based value index")
    _add_format_flags(fc)
    fc.set_defaults(handler=_cmd_formula)

    p = sub.add_parser("quantum", help="states, ABL retrodiction, slit geometry")
    quantum_sub = p.add_subparsers(dest="operation", required=True)
    for op, help_text in (
        ("abl-complete", "complete-observation retrodiction"),
        ("abl-partial", "partial-observation retrodiction"),
    ):
        qp = quantum_sub.add_parser(op, help=help_text)
        qp.add_argument("--state", required=True, help="pre state: comma-separated complex amplitudes")
        qp.add_argument("--post", required=True, help="post state amplitudes")
        qp.add_argument("--index", type=int, required=True, help="0-based basis index to retrodict")
        qp.add_argument("--basis", help="semicolon-separated basis states (default: computational)")
        _add_format_flags(qp)
        qp.set_defaults(handler=_cmd_quantum)
    qp = quantum_sub.add_parser("born", help="|<post|state>|^2")
    qp.add_argument("--state", required=True)
    qp.add_argument("--post", required=True)
    _add_format_flags(qp)
    qp.set_defaults(handler=_cmd_quantum)
    qp = quantum_sub.add_parser("condition", help="two-boxes-certain condition check (dimension 3)")
    qp.add_argument("--state", required=True)
    qp.add_argument("--post", required=True)
    _add_format_flags(qp)
    qp.set_defaults(handler=_cmd_quantum)
    qp = quantum_sub.add_parser("slits", help="three-slit geometry for the half-wavelength condition")
    qp.add_argument("--separation", type=float, required=True)
    qp.add_argument("--wavelength", type=float, required=True)
    _add_format_flags(qp)
    qp.set_defaults(handler=_cmd_quantum)
    qp = quantum_sub.add_parser("aad", help="shared-eigenstate partial vs complete retrodiction")
    qp.add_argument("--alpha", default="0.7071067811865476")
    qp.add_argument("--beta", default="0.7071067811865476")
    _add_format_flags(qp)
    qp.set_defaults(handler=_cmd_quantum)

    p = sub.add_parser("scenario", help="run a named worked example")
    p.add_argument("name", choices=sorted(SCENARIOS), help="scenario name")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="Monte Carlo trials (0 to skip)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="64-bit stream seed")
    _add_format_flags(p)
    p.set_defaults(handler=_cmd_scenario)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ThreeBoxError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except OSError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
