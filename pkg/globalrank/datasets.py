"""Download the public network snapshots used for evaluation."""

import logging
import os
from typing import Dict, Optional

import requests

from .exceptions import DatasetError, DatasetNotFoundError
from .graph import Graph, load_edge_list_bytes

logger = logging.getLogger(__name__)

DEBUG_TEXT_CUTOFF = 500

KNOWN_DATASETS: Dict[str, str] = {
    "brightkite": "loc-brightkite_edges.txt.gz",
    "dblp": "bigdata/communities/com-dblp.ungraph.txt.gz",
}


class DatasetClient:
    """Fetch edge lists of known networks over HTTP."""

    DEFAULT_TIMEOUT = 60
    DEFAULT_HOST = "https://snap.stanford.edu/data"
    HOST_ENV = "GLOBALRANK_DATA_HOST"

    def __init__(
        self,
        host: Optional[str] = None,
        timeout: int = DEFAULT_TIMEOUT,
        verify_ssl: bool = True,
        debug: bool = False,
    ):
        """
        Initialize the dataset client.

        Args:
            host: Base URL (default: $GLOBALRANK_DATA_HOST, then https://snap.stanford.edu/data)
            timeout: Request timeout in seconds (default: 60)
            verify_ssl: Verify SSL certificates (default: True)
            debug: Log requests and responses at DEBUG level (default: False)
        """
        self.host = (host or os.environ.get(self.HOST_ENV) or self.DEFAULT_HOST).rstrip('/')
        self.timeout = timeout
        self.verify_ssl = verify_ssl
        self.debug = debug

    def url_for(self, name: str) -> str:
        """
        Download URL of a known dataset.

        Raises:
            DatasetNotFoundError: If ``name`` is not a known dataset
        """
        try:
            path = KNOWN_DATASETS[name]
        except KeyError:
            known = ", ".join(sorted(KNOWN_DATASETS))
            raise DatasetNotFoundError(f"Unknown dataset {name!r} (known: {known})")
        return f"{self.host}/{path}"

    def fetch(self, name: str) -> bytes:
        """
        Raw payload of a dataset, as served.

        Raises:
            DatasetNotFoundError: On HTTP 404
            DatasetError: On other HTTP errors, timeouts and connection failures
        """
        url = self.url_for(name)
        if self.debug:
            logger.debug("GET %s", url)
        try:
            response = requests.get(url, timeout=self.timeout, verify=self.verify_ssl)
        except requests.exceptions.Timeout:
            raise DatasetError(f"Request for {url} timed out")
        except requests.exceptions.ConnectionError as e:
            raise DatasetError(f"Connection error: {str(e)}")

        if self.debug:
            logger.debug("Response: %d (%d bytes)", response.status_code, len(response.content))
        self._handle_response_errors(response)
        return response.content

    def _handle_response_errors(self, response: requests.Response) -> None:
        if response.status_code < 400:
            return
        message = response.text[:DEBUG_TEXT_CUTOFF] or f"HTTP {response.status_code}"
        if response.status_code == 404:
            raise DatasetNotFoundError(message, response, response.status_code)
        raise DatasetError(message, response, response.status_code)

    def download(self, name: str, path: str) -> int:
        """
        Save a dataset to ``path`` unchanged.

        Returns:
            Number of bytes written
        """
        payload = self.fetch(name)
        with open(path, "wb") as fh:
            fh.write(payload)
        logger.info("Saved %s to %s (%d bytes)", name, path, len(payload))
        return len(payload)

    def load(self, name: str) -> Graph:
        """Fetch a dataset and parse it as an edge list (gzip payloads are unpacked)."""
        return load_edge_list_bytes(self.fetch(name))
