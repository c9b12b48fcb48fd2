from __future__ import annotations

from types import TracebackType
from typing import Optional, Type

from httpx import Client as _Client

from topotext.base_source import BaseSource
from topotext.constants import DEFAULT_CORPUS_SOURCE_HEADERS


class CorpusSource(BaseSource):
    """Synchronous corpus source."""

    def __init__(
        self,
        base_url: str,
        *,
        headers: dict[str, str] = DEFAULT_CORPUS_SOURCE_HEADERS,
        session: Optional[_Client] = None,
    ) -> None:
        self.session: _Client = session or _Client(
            base_url=base_url, headers={**headers}, follow_redirects=True
        )

    def __enter__(self) -> CorpusSource:
        return self

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]],
        exc: Optional[BaseException],
        tb: Optional[TracebackType],
    ) -> None:
        self.session.close()

    def close(self) -> None:
        """Close the underlying HTTP transport and proxies."""
        self.session.close()
