"""Exception types shared across the package."""


class TopicflowError(Exception):
    """Base class for all errors raised by this package."""


class IoError(TopicflowError):
    """A referenced file is missing or unreadable."""


class ParseError(TopicflowError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateIdError(TopicflowError):
    def __init__(self, doc_id: str):
        super().__init__(f"duplicate document id {doc_id!r}")
        self.doc_id = doc_id


class EmptyCorpusError(TopicflowError):
    """No documents to work with."""


class InvalidSpecError(TopicflowError):
    """A configuration value violates its constraints."""


class EmptyAfterFilteringError(TopicflowError):
    """Every token was removed by stop-word filtering."""


class NoDocumentsError(TopicflowError):
    """A model fit was requested on an empty bag list."""


class AllBagsEmptyError(TopicflowError):
    """Every bag in the fit request has zero tokens."""


class DimensionMismatchError(TopicflowError):
    """Two distributions have different lengths."""


class TooFewEpochsError(TopicflowError):
    """Graph construction needs at least two epoch models."""


class EmptyInputError(TopicflowError):
    """An empirical CDF cannot be built from zero values."""


class InvalidZetaError(TopicflowError):
    """The CDF operating point must lie in [0, 1]."""


class NodeSetMismatchError(TopicflowError):
    """Graphs passed to a joint analysis cover different node sets."""


class UnprunedGraphError(TopicflowError):
    """The operation requires a graph that has been pruned."""


class EmptyQueryError(TopicflowError):
    """The search query contains no usable tokens."""


class NoVocabularyMatchError(TopicflowError):
    """No query term maps into the analysis vocabulary."""


class UnknownNodeError(TopicflowError):
    def __init__(self, epoch: int, topic_id: int):
        super().__init__(f"no topic ({epoch}, {topic_id}) in this analysis")
        self.epoch = epoch
        self.topic_id = topic_id


class FitCancelledError(TopicflowError):
    """A Gibbs chain was cancelled between sweeps."""
