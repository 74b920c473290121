"""Seeded Monte Carlo sampling of experiments, for checking the exact engine.

Each trial walks the experiment's events with its own counter-based draw
stream (see :mod:`threebox.rng`), so a run is a deterministic function of
(experiment, trials, seed) and is invariant under trial reordering.  Results
come back as frequency tables with binomial standard errors.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .deck import Outcome, SystemState, observe, prepare
from .errors import InvalidArgumentsError, NoAcceptedTrialsError
from .exact import Experiment
from .rng import CounterStream


@dataclass(frozen=True)
class RunConfig:
    """A simulation request: experiment, trial count, 64-bit seed."""

    experiment: Experiment
    trials: int
    seed: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise InvalidArgumentsError("a run needs at least one trial")


def run_trial(experiment: Experiment, seed: int, trial: int) -> tuple[Outcome, ...]:
    """Walk one trial's events with its own (seed, trial)-keyed draw stream."""
    stream = CounterStream(seed, trial)
    state = prepare(experiment.deck, experiment.preparation)
    outcomes = []
    for manifestation in experiment.manifestations:
        outcome, state, _ = observe(state, manifestation, stream.uniform_index)
        outcomes.append(outcome)
    return tuple(outcomes)


@dataclass
class RetrodictionEstimate:
    """Conditional frequency among accepted trials, with its standard error."""

    estimate: float
    standard_error: float
    accepted: int
    acceptance_rate: float


@dataclass
class FrequencyTable:
    """Counts per outcome sequence, with empirical probabilities and errors."""

    experiment: Experiment
    trials: int
    seed: int
    counts: dict[tuple[Outcome, ...], int]
    accepted: int

    def frequency(self, outcomes: tuple[Outcome, ...]) -> float:
        return self.counts.get(outcomes, 0) / self.trials

    def marginal_count(self, ordinal: int, outcome: Outcome) -> int:
        return sum(n for seq, n in self.counts.items() if seq[ordinal - 1] == outcome)

    def marginal_frequency(self, ordinal: int, outcome: Outcome) -> float:
        """Empirical chance that the event at ``ordinal`` reported ``outcome``."""
        self.experiment.check_outcome_at(ordinal, outcome, "query")
        return self.marginal_count(ordinal, outcome) / self.trials

    def retrodiction(self, ordinal: int, outcome: Outcome) -> "RetrodictionEstimate":
        """Conditional frequency of ``outcome`` among accepted trials."""
        if self.experiment.postselection is None:
            raise InvalidArgumentsError("retrodiction needs an experiment with a postselection")
        self.experiment.check_outcome_at(ordinal, outcome, "query")
        if self.accepted == 0:
            raise NoAcceptedTrialsError("postselection never fired; exact acceptance is presumably zero")
        ps_ordinal, ps_outcome = self.experiment.postselection
        hits = sum(
            n
            for seq, n in self.counts.items()
            if seq[ps_ordinal - 1] == ps_outcome and seq[ordinal - 1] == outcome
        )
        estimate = hits / self.accepted
        return RetrodictionEstimate(
            estimate=estimate,
            standard_error=self.standard_error(estimate, self.accepted),
            accepted=self.accepted,
            acceptance_rate=self.acceptance_rate,
        )

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.trials

    def standard_error(self, p: float, n: int | None = None) -> float:
        """Binomial standard error of a frequency estimated from ``n`` trials."""
        n = self.trials if n is None else n
        return math.sqrt(p * (1 - p) / n) if n else float("inf")

    def to_dict(self) -> dict:
        rows = []
        for seq in sorted(self.counts, key=lambda s: tuple(map(str, s))):
            n = self.counts[seq]
            p = n / self.trials
            rows.append(
                {
                    "outcomes": [str(o) for o in seq],
                    "count": n,
                    "frequency": _sig12(p),
                    "standard_error": _sig12(self.standard_error(p)),
                }
            )
        report = {
            "trials": self.trials,
            "seed": self.seed,
            "sequences": rows,
        }
        if self.experiment.postselection is not None:
            report["accepted"] = self.accepted
            report["acceptance_rate"] = _sig12(self.acceptance_rate)
        return report


def simulate(config: RunConfig) -> FrequencyTable:
    """Run every trial and tally outcome sequences and postselection hits.

    The per-trial merge is plain count addition, so the result does not
    depend on the order trials are executed in.
    """
    experiment = config.experiment
    counts: Counter[tuple[Outcome, ...]] = Counter()
    walker = _TreeWalker(experiment)
    for trial in range(config.trials):
        counts[walker.run(CounterStream(config.seed, trial))] += 1
    accepted = config.trials
    if experiment.postselection is not None:
        ordinal, outcome = experiment.postselection
        accepted = sum(n for seq, n in counts.items() if seq[ordinal - 1] == outcome)
    return FrequencyTable(
        experiment=experiment,
        trials=config.trials,
        seed=config.seed,
        counts=dict(counts),
        accepted=accepted,
    )


def estimate_retrodiction(config: RunConfig, ordinal: int, outcome: Outcome) -> RetrodictionEstimate:
    """Empirical retrodiction: frequency of ``outcome`` among accepted trials.

    Raises NoAcceptedTrialsError when the postselection never fires; the
    caller should then compare against an exact acceptance probability of
    zero rather than against a conditional.
    """
    return simulate(config).retrodiction(ordinal, outcome)


def _sig12(x: float) -> float:
    """Round to 12 significant digits for stable, readable reports."""
    return float(f"{x:.12g}")


class _TreeWalker:
    """Pre-compiled transition tables for fast trial execution.

    For every reachable (state, remaining events) node this caches the draw
    pool size and the map from draw index to the successor node, which is
    exactly the ``observe`` transition without rebuilding states per trial.
    """

    def __init__(self, experiment: Experiment):
        self._experiment = experiment
        self._root = self._compile(prepare(experiment.deck, experiment.preparation), 0)

    def _compile(self, state: SystemState, depth: int):
        if depth == len(self._experiment.manifestations):
            return None
        manifestation = self._experiment.manifestations[depth]
        deck = self._experiment.deck
        variable = deck.variable(manifestation.variable).name
        same = state.memory == variable
        pool = state.these if same else state.others
        successors: dict[Outcome, tuple] = {}
        by_index = []
        for card in pool:
            outcome = manifestation.outcome_for(deck.label_of(card, variable))
            if outcome not in successors:
                child_state = state if same else prepare(deck, outcome)
                successors[outcome] = (outcome, self._compile(child_state, depth + 1))
            by_index.append(successors[outcome])
        return len(pool), tuple(by_index)

    def run(self, stream: CounterStream) -> tuple[Outcome, ...]:
        outcomes = []
        node = self._root
        while node is not None:
            pool_size, by_index = node
            outcome, node = by_index[stream.uniform_index(pool_size)]
            outcomes.append(outcome)
        return tuple(outcomes)
