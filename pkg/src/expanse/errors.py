"""Exception taxonomy shared across the toolkit."""


class ExpanseError(Exception):
    """Base class for all toolkit errors."""


class MalformedInputError(ExpanseError):
    """Raw input references out-of-range generators or is otherwise unusable."""


class ParameterError(ExpanseError):
    """A numeric parameter is outside its admissible range."""


class ConfigError(ExpanseError):
    """Experiment configuration failed to parse or validate."""


class ArcTooShortError(ExpanseError):
    """An arc's sampled diameter is below 2*delta; the caller must shrink delta."""


class ConstructionError(ExpanseError):
    """A doubling construction step found no separating word within its budget."""


class EvaluationError(ExpanseError):
    """A numerical inverse failed to converge."""


class CapacityError(ExpanseError):
    """A partial map fragmented into more domain intervals than supported."""
