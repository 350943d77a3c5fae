import threading
import time

import pytest
import uvicorn

from emoaug_sidecar import ServiceConfig, create_app


class LiveServer:
    """Runs the app under a real uvicorn server on an ephemeral port."""

    def __init__(self, config: ServiceConfig):
        self._uv_config = uvicorn.Config(
            create_app(config), host="127.0.0.1", port=0, log_level="warning"
        )
        self._server = uvicorn.Server(self._uv_config)
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def __enter__(self):
        self._thread.start()
        deadline = time.time() + 10
        while not self._server.started:
            if time.time() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.01)
        port = self._server.servers[0].sockets[0].getsockname()[1]
        return f"http://127.0.0.1:{port}"

    def __exit__(self, *exc):
        self._server.should_exit = True
        self._thread.join(timeout=10)


@pytest.fixture(scope="session")
def echo_server():
    with LiveServer(ServiceConfig(echo=True)) as base_url:
        yield base_url


@pytest.fixture(scope="session")
def unloaded_server():
    # No models configured and echo off: every role must answer 501.
    with LiveServer(ServiceConfig(echo=False)) as base_url:
        yield base_url
