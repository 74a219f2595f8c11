"""Exception types raised across the pipeline."""


class RevmineError(Exception):
    """Base class for all errors raised by this package."""


class NoTextExtracted(RevmineError):
    """A source produced no body text once math and markup were removed."""


class MalformedMetadata(RevmineError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class EmptyCorpus(RevmineError):
    """No documents were available to build a model or run a command."""


class SampleTooLarge(RevmineError):
    pass


class DegenerateAgreement(RevmineError):
    """Fleiss' kappa is undefined because every rating fell in one category."""


class ThresholdTooLow(RevmineError):
    """A majority threshold at or below half the raters is not unique."""


class EmptySubset(RevmineError):
    pass


class LabelIngestError(RevmineError):
    def __init__(self, message, row=None, pair_id=None):
        self.row = row
        self.pair_id = pair_id
        where = []
        if row is not None:
            where.append(f"row {row}")
        if pair_id is not None:
            where.append(f"pair_id {pair_id!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class MissingPairs(RevmineError):
    """The stats step found no pairs file to read."""


class ConfigError(RevmineError):
    pass
