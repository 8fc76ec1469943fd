"""Smart-home device API client.

Bundled next to the handler so generated code can read and change device
state without knowing the wire protocol. The API base URL comes from the
HOME_API_URL environment variable.
"""

import json
import os
import urllib.error
import urllib.request

_BASE_URL = os.environ.get("HOME_API_URL", "http://127.0.0.1:7770")


class HomeApiError(Exception):
    pass


def _request(method, path, payload=None):
    url = _BASE_URL.rstrip("/") + path
    data = None
    headers = {}
    if payload is not None:
        data = json.dumps(payload).encode("utf-8")
        headers["Content-Type"] = "application/json"
    req = urllib.request.Request(url, data=data, headers=headers, method=method)
    try:
        with urllib.request.urlopen(req, timeout=5) as resp:
            body = resp.read()
    except urllib.error.HTTPError as err:
        raise HomeApiError(f"{method} {path} failed: {err.code} {err.read().decode('utf-8', 'replace')}")
    except urllib.error.URLError as err:
        raise HomeApiError(f"{method} {path} unreachable: {err.reason}")
    if not body:
        return None
    return json.loads(body.decode("utf-8"))


def get(device, attribute):
    """Return the current value of one device attribute."""
    result = _request("GET", f"/devices/{device}/{attribute}")
    return result["value"]


def set(device, attribute, value):
    """Set one device attribute and return the new value."""
    result = _request("PUT", f"/devices/{device}/{attribute}", {"value": value})
    return result["value"]


def devices():
    """Return the list of device ids."""
    return _request("GET", "/devices")


def state():
    """Return a {device: {attribute: value}} snapshot of the whole home."""
    return _request("GET", "/state")
