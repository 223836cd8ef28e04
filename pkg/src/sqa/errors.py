"""Exception hierarchy shared across the package."""


class SqaError(Exception):
    """Base class for all package errors."""


class IngestError(SqaError):
    """Corpus file could not be ingested (malformed line, dangling ids)."""


class ResolutionError(SqaError):
    """Entity resolution received invalid input."""


class AssemblyError(SqaError):
    """Query could not be assembled from the given parameters."""


class InvalidFacetError(SqaError):
    """Facet request names a type that cannot be faceted."""


class TransientProviderError(SqaError):
    """Retryable transport-level provider failure."""


class ProviderUnavailableError(SqaError):
    """Provider kept failing after the configured number of retries."""


class EmptyCompletionError(SqaError):
    """Provider returned neither text nor a tool invocation."""


class InvalidToolError(SqaError):
    """Tool invocation named a tool outside the exposed set."""


class InvalidArgumentsError(SqaError):
    """Tool invocation arguments failed schema validation after repair."""


class MockScriptMiss(SqaError):
    """Mock provider had no scripted reply for a request fingerprint."""


class PlannerParseError(SqaError):
    """Planner model output could not be parsed after a repair attempt."""


class InvalidPlanError(SqaError):
    """Plan failed validation even after a repair re-prompt."""


class EmptyDependencyError(SqaError):
    """A placeholder referenced a dependency step that returned no rows."""


class CompositionError(SqaError):
    """Writing stage could not produce a response."""


class EvalInputError(SqaError):
    """Evaluation harness received invalid input."""


class SamplingError(SqaError):
    """Dataset sampling could not satisfy the requested category counts."""
