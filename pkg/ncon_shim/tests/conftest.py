import json
import socket
import subprocess
import sys
import time
import urllib.error
import urllib.request
from pathlib import Path

import pytest

SHIM_DIR = Path(__file__).resolve().parent.parent
REPO = SHIM_DIR.parent
sys.path.insert(0, str(SHIM_DIR))  # the module under test: `ncon`


def _free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class Service:
    def __init__(self, url):
        self.url = url

    def post(self, path, doc):
        req = urllib.request.Request(
            self.url + path, data=json.dumps(doc).encode(),
            headers={"content-type": "application/json"})
        try:
            with urllib.request.urlopen(req) as r:
                body = r.read().decode()
                status = r.status
        except urllib.error.HTTPError as e:
            body = e.read().decode()
            status = e.code
        ctype_json = body[:1] in "{["
        return status, json.loads(body) if ctype_json else body


@pytest.fixture(scope="session")
def service():
    """The compiler's HTTP service, spawned as a real subprocess."""
    port = _free_port()
    proc = subprocess.Popen(
        [sys.executable, "-m", "ttc.cli", "serve", "--port", str(port)],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    url = f"http://127.0.0.1:{port}"
    deadline = time.monotonic() + 30
    while True:
        try:
            with urllib.request.urlopen(url + "/api/health", timeout=1):
                break
        except Exception:
            if time.monotonic() > deadline:
                proc.terminate()
                raise RuntimeError("service did not come up")
            time.sleep(0.2)
    yield Service(url)
    proc.terminate()
    proc.wait(timeout=10)


@pytest.fixture(scope="session")
def fixture_docs():
    out = {}
    for path in sorted((REPO / "fixtures").glob("*.tnp")):
        if path.stem in ("malformed", "invalid_unwired"):
            continue
        out[path.stem] = json.loads(path.read_text(encoding="utf-8"))
    return out
