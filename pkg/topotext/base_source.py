from __future__ import annotations

import logging
from pathlib import PurePosixPath
from typing import AnyStr, Awaitable, Optional, TypeVar, Union

from httpx import AsyncClient, BasicAuth, Client, Response

from topotext.errors import ConfigError
from topotext.textpipeline import Corpus, parse_corpus

logger = logging.getLogger(__name__)

T = TypeVar("T", bound="BaseSource")


class CorpusRequest:
    """A pending download of a corpus file and its optional label file."""

    def __init__(
        self,
        session: Union[AsyncClient, Client],
        text_path: str,
        label_path: Optional[str] = None,
        *,
        label: Optional[str] = None,
    ) -> None:
        self.session = session
        self.text_path = text_path
        self.label_path = label_path
        self.label = label
        self.label_data: Optional[bytes] = None

    @property
    def name(self) -> str:
        return PurePosixPath(self.text_path).stem or "doc"

    def with_labels(self, data: bytes) -> CorpusRequest:
        """
        Use label lines already at hand instead of downloading a label file.

        Returns:
            The modified request.
        """
        self.label_path = None
        self.label_data = data
        return self

    def _fetched(self, r: Response) -> bytes:
        r.raise_for_status()
        logger.debug("fetched %s: %d bytes", r.url, len(r.content))
        return r.content

    def _parse(self, text: bytes, labels: Optional[bytes]) -> Corpus:
        return parse_corpus(text, labels, name=self.name, label=self.label)

    def _sync_request(self) -> Optional[Corpus]:
        if isinstance(self.session, AsyncClient):
            return

        text = self._fetched(self.session.get(self.text_path))
        labels = self.label_data
        if self.label_path is not None:
            labels = self._fetched(self.session.get(self.label_path))
        return self._parse(text, labels)

    async def _async_request(self) -> Optional[Corpus]:
        if isinstance(self.session, Client):
            return

        text = self._fetched(await self.session.get(self.text_path))
        labels = self.label_data
        if self.label_path is not None:
            labels = self._fetched(await self.session.get(self.label_path))
        return self._parse(text, labels)

    def execute(self) -> Awaitable[Optional[Corpus]]:
        """
        Download and parse the corpus.

        Returns:
            [Corpus][topotext.textpipeline.Corpus], awaitable with an async source.
        Raises:
            httpx.HTTPStatusError: if a download does not succeed.
            CorpusDecodeError: if a line is not valid UTF-8.
            CorpusError: if the text and label line counts differ.
        """
        if isinstance(self.session, AsyncClient):
            return self._async_request()
        else:
            return self._sync_request()  # type: ignore


class BaseSource:
    def __init__(self) -> None:
        self.session: Union[Client, AsyncClient]

    def auth(
        self: T,
        token: Optional[str] = None,
        *,
        username: Optional[AnyStr] = None,
        password: AnyStr = "",
    ) -> T:
        """
        Credentials for a private corpus host, sent with every text and label
        download. A bearer token wins over a username.

        Returns:
            The modified source.
        Raises:
            ConfigError: if neither a token nor a username is given, or a
                username comes without a password.
        """
        if token:
            self.session.headers["Authorization"] = f"Bearer {token}"
        elif username and password:
            self.session.auth = BasicAuth(username, password)
        elif username:
            raise ConfigError(f"no password for corpus host user {username!r}")
        else:
            raise ConfigError("corpus host credentials need a token or a username")
        return self

    def headers(self: T, headers: dict[str, str]) -> T:
        """
        Send extra headers with every download.

        Returns:
            The modified source.
        """
        self.session.headers.update(headers)
        return self

    def corpus(
        self,
        text_path: str,
        label_path: Optional[str] = None,
        *,
        label: Optional[str] = None,
    ) -> CorpusRequest:
        """
        Fetch a corpus, relative to the source's base URL.

        Args:
            text_path: path of the one-document-per-line text file.
            label_path: path of the matching label file.
            label: single-label mode, used when `label_path` is not given.
        Returns:
            [CorpusRequest][topotext.base_source.CorpusRequest]
        """
        return CorpusRequest(self.session, text_path, label_path, label=label)
