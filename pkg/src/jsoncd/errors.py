"""Exception hierarchy shared across the package."""

from __future__ import annotations


class JsonCDError(Exception):
    """Base class for every error raised by jsoncd."""


class MalformedJson(JsonCDError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class NotASchema(JsonCDError):
    pass


class UnresolvedExternalRef(JsonCDError):
    def __init__(self, uri: str) -> None:
        super().__init__(f"reference to external resource {uri!r}")
        self.uri = uri


class RefCycleTooDeep(JsonCDError):
    pass


class UnsupportedKeyword(JsonCDError):
    def __init__(self, name: str) -> None:
        super().__init__(f"keyword {name!r} is not supported by the validator")
        self.name = name


class InvalidSchema(JsonCDError):
    pass


class EmptyInput(JsonCDError):
    pass


class DepthExceeded(JsonCDError):
    pass


class CompileTimeout(JsonCDError):
    pass


class GapInIds(JsonCDError):
    pass


class MissingEos(JsonCDError):
    pass


class RejectAt(JsonCDError):
    def __init__(self, offset: int) -> None:
        super().__init__(f"token rejected at byte {offset}")
        self.offset = offset


class UntokenizableBytes(JsonCDError):
    def __init__(self, pos: int) -> None:
        super().__init__(f"no vocabulary token covers byte {pos}")
        self.pos = pos


class DeadEnd(JsonCDError):
    pass


class GenerationTimeout(JsonCDError):
    pass


class ProtocolError(JsonCDError):
    pass


class StreamClosed(JsonCDError):
    pass


class MalformedSuiteFile(JsonCDError):
    def __init__(self, path: str, reason: str) -> None:
        super().__init__(f"{path}: {reason}")
        self.path = path


class EmptyIntersection(JsonCDError):
    pass


class UnknownFormat(JsonCDError):
    pass
