from __future__ import annotations

from types import TracebackType
from typing import Optional, Type

from httpx import AsyncClient as _AsyncClient

from topotext.base_source import BaseSource
from topotext.constants import DEFAULT_CORPUS_SOURCE_HEADERS


class AsyncCorpusSource(BaseSource):
    """Asyncio compatible corpus source."""

    def __init__(
        self,
        base_url: str,
        *,
        headers: dict[str, str] = DEFAULT_CORPUS_SOURCE_HEADERS,
        session: Optional[_AsyncClient] = None,
    ) -> None:
        """
        Create a corpus source.

        Args:
            base_url: base URL the corpus paths are relative to.
            headers: Any headers that have to be sent with every request.
            session: instance of httpx.AsyncClient if you want to reuse an existing one.
        """
        self.session: _AsyncClient = session or _AsyncClient(
            base_url=base_url, headers={**headers}, follow_redirects=True
        )

    async def __aenter__(self) -> AsyncCorpusSource:
        return self

    async def __aexit__(
        self,
        exc_type: Optional[Type[BaseException]],
        exc: Optional[BaseException],
        tb: Optional[TracebackType],
    ) -> None:
        await self.aclose()

    async def aclose(self) -> None:
        """
        Close the underlying HTTP transport and proxies.
        """
        await self.session.aclose()
