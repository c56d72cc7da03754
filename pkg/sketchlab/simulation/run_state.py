import logging
from collections import defaultdict

logger = logging.getLogger(__name__)


class RunState:
    """
    Bookkeeping for one experiment run.

    Handles:
    - Running / finished flags
    - Trial records grouped by cell, addressed by trial index
    - Rank-flag failure counts
    - Aggregation order (cells in enumeration order, trials by index)

    Records may arrive in any order; reading them back is always ordered, so
    aggregates do not depend on how many workers produced them.
    """

    def __init__(self):
        self.running = False
        self.finished = False
        self.records = defaultdict(dict)  # cell index -> {trial_index: TrialRecord}
        self.cell_order = []

    def start(self, cell_keys):
        self.reset()
        self.cell_order = list(cell_keys)
        self.running = True

    def record(self, cell_key, rec):
        if cell_key not in self.cell_order:
            raise KeyError(f"unknown cell {cell_key!r}")
        self.records[cell_key][rec.trial_index] = rec

    def cell_records(self, cell_key):
        trials = self.records.get(cell_key, {})
        return [trials[k] for k in sorted(trials)]

    def all_records(self):
        return [rec for key in self.cell_order for rec in self.cell_records(key)]

    def rank_failures(self, cell_key=None):
        keys = self.cell_order if cell_key is None else [cell_key]
        return sum(1 for key in keys for rec in self.cell_records(key) if not rec.rank_flag)

    def finish(self):
        self.running = False
        self.finished = True
        logger.debug(
            "run finished: %d cells, %d trials, %d rank-flag failures",
            len(self.cell_order),
            sum(len(self.records[key]) for key in self.cell_order),
            self.rank_failures(),
        )

    def reset(self):
        self.running = False
        self.finished = False
        self.records.clear()
        self.cell_order = []
