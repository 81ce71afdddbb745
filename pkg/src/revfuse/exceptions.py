"""Exception hierarchy shared by every module."""


class RevfuseError(ValueError):
    """Base class for data and configuration errors raised by revfuse."""


class InputTooShortError(RevfuseError):
    pass


class ConfigurationError(RevfuseError):
    pass


class AudioFormatError(RevfuseError):
    pass


class FileFormatError(RevfuseError):
    pass


class InfeasibleRoomError(RevfuseError):
    """Requested reverberation time cannot be produced by the room geometry."""


class InsufficientDecayError(RevfuseError):
    def __init__(self, reached_db):
        self.reached_db = float(reached_db)
        super().__init__(
            f"insufficient decay range: energy decay curve only reaches "
            f"{self.reached_db:.1f} dB, need -35 dB"
        )


class DimensionMismatchError(RevfuseError):
    pass


class EmptyInputError(RevfuseError):
    pass


class ScoresUnavailableError(RevfuseError):
    pass
