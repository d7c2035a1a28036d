"""Exception hierarchy.  Everything raised on bad mathematical input derives
from FerencziError so the CLI can map it to exit code 1."""

import os


class FerencziError(Exception):
    """Base class for domain errors."""

    code = "domain_error"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class ScheduleError(FerencziError, ValueError):
    code = "invalid_schedule"

    def __init__(self, message: str, stage: int | None = None):
        if stage is not None:
            message = f"stage {stage}: {message}"
        super().__init__(message)
        self.stage = stage


class CapExceeded(FerencziError):
    code = "cap_exceeded"

    def __init__(self, needed: int, cap: int, what: str = "word"):
        super().__init__(f"{what} of length {needed} exceeds materialization cap {cap} "
                         f"(set FERENCZI_CAP to raise it)")
        self.needed = needed
        self.cap = cap


class AlphabetMismatch(FerencziError, ValueError):
    code = "alphabet_mismatch"


class NotInLanguage(FerencziError, ValueError):
    code = "not_in_language"


class WindowTooShort(FerencziError, ValueError):
    code = "window_too_short"

    def __init__(self, needed: int, got: int):
        super().__init__(f"window of length {got} is too short, need at least {needed}")
        self.needed = needed


class RealizationError(FerencziError):
    code = "realization_failed"


DEFAULT_CAP = 10 ** 7


def materialization_cap() -> int:
    raw = os.environ.get("FERENCZI_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_CAP


def check_cap(length: int, what: str = "word") -> None:
    cap = materialization_cap()
    if length > cap:
        raise CapExceeded(length, cap, what)
