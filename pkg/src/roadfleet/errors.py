"""Exception hierarchy shared across the package."""


class RoadfleetError(Exception):
    """Base class for all domain errors."""


# --- manifest / archive ---------------------------------------------------

class MalformedManifest(RoadfleetError):
    """Manifest document is missing fields or has unparseable values."""


class InvariantViolation(RoadfleetError):
    """A domain invariant would be broken by the requested value."""


class MalformedArchive(RoadfleetError):
    """Package archive is not a valid container (bad zip, missing manifest,
    payload digest mismatch)."""


class DigestMismatch(RoadfleetError):
    """Payload bytes do not match the digest recorded in the manifest."""


# --- center ---------------------------------------------------------------

class HardwareIdInUse(RoadfleetError):
    """Hardware id is already bound to a different logical station."""


class UnknownStation(RoadfleetError):
    pass


class UnknownPackage(RoadfleetError):
    pass


class DuplicateVersionConflict(RoadfleetError):
    """Same (name, version) published with a different payload digest."""


class DependencyUnsatisfiable(RoadfleetError):
    """No repository version satisfies a dependency bound.

    ``missing`` names the dependency that could not be resolved.
    """

    def __init__(self, missing: str, detail: str = ""):
        self.missing = missing
        super().__init__(detail or f"dependency unsatisfiable: {missing}")


class UnknownWorker(RoadfleetError):
    pass


class NoWorkerAvailable(RoadfleetError):
    """Every worker in the pool is DOWN."""


class CorruptSnapshot(RoadfleetError):
    """Snapshot blob failed its digest check."""


# --- agent ----------------------------------------------------------------

class MissingDependency(RoadfleetError):
    """Install attempted before its dependency is present on the station."""

    def __init__(self, missing: str):
        self.missing = missing
        super().__init__(f"missing dependency: {missing}")


class DiskQuotaExceeded(RoadfleetError):
    pass


# --- framework ------------------------------------------------------------

class DuplicateName(RoadfleetError):
    pass


class IllegalTransition(RoadfleetError):
    """Lifecycle transition not permitted by the state graph."""


# --- netsim ---------------------------------------------------------------

class FrameTooLarge(RoadfleetError):
    """Frame exceeds the bucket burst and can never be admitted."""


class LinkDown(RoadfleetError):
    pass


# --- scenarios ------------------------------------------------------------

class ScenarioError(RoadfleetError):
    """Scenario file failed to parse or validate."""


class UnknownTarget(RoadfleetError):
    """Directive references a station, package, or worker not in the scenario."""
