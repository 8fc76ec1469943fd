"""HTTP wrapper around a guest handler module.

Injected next to the handler at prepare time. Loads the handler module,
binds an ephemeral loopback port, writes the port number to ``.port`` in
the working directory, and serves:

    GET  /_health  -> 200 "ok"
    POST /         -> handler result, or 500 with X-Guest-Error on raise
"""

import importlib
import os
import sys
import traceback
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

HANDLER_MODULE = os.environ.get("GUEST_HANDLER_MODULE", "fn")
HANDLER_SYMBOL = os.environ.get("GUEST_HANDLER_SYMBOL", "fn")


def load_handler():
    module = importlib.import_module(HANDLER_MODULE)
    handler = getattr(module, HANDLER_SYMBOL, None)
    if not callable(handler):
        print(
            "handler symbol %r is not defined or not callable in module %r"
            % (HANDLER_SYMBOL, HANDLER_MODULE),
            file=sys.stderr,
        )
        sys.exit(3)
    return handler


def to_bytes(value):
    if value is None:
        return b""
    if isinstance(value, bytes):
        return value
    if isinstance(value, str):
        return value.encode("utf-8")
    return str(value).encode("utf-8")


def main():
    try:
        handler = load_handler()
    except SystemExit:
        raise
    except BaseException:
        traceback.print_exc()
        sys.exit(3)

    class GuestRequestHandler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # default logger is too chatty
            pass

        def _reply(self, status, body, guest_error=False):
            self.send_response(status)
            self.send_header("Content-Type", "application/octet-stream")
            self.send_header("Content-Length", str(len(body)))
            if guest_error:
                self.send_header("X-Guest-Error", "1")
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):
            if self.path == "/_health":
                self._reply(200, b"ok")
            else:
                self._reply(404, b"not found")

        def do_POST(self):
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            try:
                request_text = raw.decode("utf-8")
            except UnicodeDecodeError:
                request_text = raw.decode("utf-8", errors="replace")
            try:
                result = handler(request_text)
            except BaseException:
                text = traceback.format_exc()
                print(text, file=sys.stderr)
                sys.stderr.flush()
                self._reply(500, text.encode("utf-8"), guest_error=True)
                return
            self._reply(200, to_bytes(result))

    server = ThreadingHTTPServer(("127.0.0.1", 0), GuestRequestHandler)
    server.daemon_threads = True
    port = server.server_address[1]
    port_file = os.path.join(os.path.dirname(os.path.abspath(__file__)), ".port")
    with open(port_file + ".tmp", "w") as fh:
        fh.write(str(port))
    os.replace(port_file + ".tmp", port_file)
    try:
        server.serve_forever(poll_interval=0.05)
    except KeyboardInterrupt:
        pass


if __name__ == "__main__":
    main()
