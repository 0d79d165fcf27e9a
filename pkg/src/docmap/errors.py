"""Error types that surface through the wire protocol as stable codes."""

from __future__ import annotations


class ServiceError(Exception):
    """Base class; `code` is the exact string sent to clients."""

    code = "internal"

    def __init__(self, msg: str):
        super().__init__(msg)
        self.msg = msg


class NoSuchSessionError(ServiceError):
    code = "no-such-session"


class NoSuchEngineError(ServiceError):
    code = "no-such-engine"


class NoSuchDocumentError(ServiceError):
    code = "no-such-document"


class EmptyQueryError(ServiceError):
    code = "empty-query"


class ServerBusyError(ServiceError):
    code = "server-busy"


class NoSearchYetError(ServiceError):
    code = "no-search-yet"


class AdapterFormatError(ServiceError):
    code = "adapter-format"


class BadRequestError(ServiceError):
    """Malformed protocol frame: unparseable JSON, unknown op, missing field."""

    code = "bad-request"
