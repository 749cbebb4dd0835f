"""HTTP service exposing the pipeline's stage outputs and audio.

Endpoints:
  GET/POST /process  params INPUT_TEXT, INPUT_TYPE (TEXT|SSML),
                     OUTPUT_TYPE (TOKENS|WORDS|PHONEMES|ALLOPHONES|
                     ACOUSTPARAMS|AUDIO), VOICE (optional when exactly one
                     voice is loaded)
  POST /score-mrt    params SESSION (session JSON), SHEETS (answer CSV)
                     -> JSON report
  POST /score-mos    params RESPONSES (rating CSV) -> JSON report
  GET /voices        loaded voice names, one per line
  GET /version       the engine version string

Voices load at startup; requests share the read-only inventory, so any
number may run concurrently.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from . import __version__
from .errors import MalformedMarkup, PipelineStageError
from .frontend import InputKind
from .pipeline import Pipeline
from .serialize import OUTPUT_TYPES, render_output
from .voicedb import VoiceInventory

DEFAULT_PORT = 59125


@dataclass
class ServiceConfig:
    port: int = DEFAULT_PORT
    voice_dirs: dict[str, str] = field(default_factory=dict)  # name -> directory
    data_dir: str | None = None
    log_level: str = "info"

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port {self.port} outside 1..65535")


class TtsService:
    """Request-independent core shared by every handler thread."""

    def __init__(self, pipeline: Pipeline, voices: dict[str, VoiceInventory]):
        self.pipeline = pipeline
        self.voices = dict(voices)

    def process(self, params: dict[str, str]) -> tuple[int, str, bytes]:
        text = params.get("INPUT_TEXT")
        if text is None:
            return 400, "text/plain; charset=utf-8", b"missing INPUT_TEXT\n"
        input_type = params.get("INPUT_TYPE", "TEXT")
        if input_type not in ("TEXT", "SSML"):
            return 400, "text/plain; charset=utf-8", f"bad INPUT_TYPE {input_type}\n".encode()
        output_type = params.get("OUTPUT_TYPE", "AUDIO")
        if output_type not in OUTPUT_TYPES:
            return 400, "text/plain; charset=utf-8", f"bad OUTPUT_TYPE {output_type}\n".encode()
        voice = None
        if output_type == "AUDIO":
            name = params.get("VOICE")
            if name is None and len(self.voices) == 1:
                name = next(iter(self.voices))
            if name is None or name not in self.voices:
                return 404, "text/plain; charset=utf-8", f"unknown voice {name}\n".encode()
            voice = self.voices[name]
        kind = InputKind.SSML if input_type == "SSML" else InputKind.PLAIN
        try:
            content_type, body = render_output(self.pipeline, text, kind, output_type, voice)
        except PipelineStageError as exc:
            if isinstance(exc.cause, MalformedMarkup):
                return 400, "text/plain; charset=utf-8", f"{exc.cause}\n".encode()
            return 500, "text/plain; charset=utf-8", f"stage={exc.stage}: {exc.cause}\n".encode()
        except Exception as exc:  # defensive: unexpected input trouble
            return 400, "text/plain; charset=utf-8", f"{exc}\n".encode()
        return 200, content_type, body

    def score_mrt(self, params: dict[str, str]) -> tuple[int, str, bytes]:
        from .evaluation import MrtSession, read_mrt_sheets_csv, render_report, score_mrt

        session_json = params.get("SESSION")
        sheets_csv = params.get("SHEETS")
        if session_json is None or sheets_csv is None:
            return 400, "text/plain; charset=utf-8", b"missing SESSION or SHEETS\n"
        try:
            session = MrtSession.from_json(session_json)
            report = score_mrt(session, read_mrt_sheets_csv(sheets_csv))
        except Exception as exc:
            return 400, "text/plain; charset=utf-8", f"{exc}\n".encode()
        return 200, "application/json", render_report(report, "JSON").encode()

    def score_mos(self, params: dict[str, str]) -> tuple[int, str, bytes]:
        from .evaluation import read_mos_responses_csv, render_report, score_mos

        responses_csv = params.get("RESPONSES")
        if responses_csv is None:
            return 400, "text/plain; charset=utf-8", b"missing RESPONSES\n"
        try:
            report = score_mos(read_mos_responses_csv(responses_csv))
        except Exception as exc:
            return 400, "text/plain; charset=utf-8", f"{exc}\n".encode()
        return 200, "application/json", render_report(report, "JSON").encode()

    def voices_body(self) -> bytes:
        names = sorted(self.voices)
        return ("\n".join(names) + "\n").encode() if names else b""

    def version_body(self) -> bytes:
        return f"{__version__}\n".encode()


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def service(self) -> TtsService:
        return self.server.service  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):
        pass  # quiet by default; tests drive many requests

    def _reply(self, status: int, content_type: str, body: bytes):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _route(self, params: dict[str, str]):
        path = urlsplit(self.path).path
        if path == "/process":
            status, ctype, body = self.service.process(params)
            self._reply(status, ctype, body)
        elif path == "/score-mrt":
            status, ctype, body = self.service.score_mrt(params)
            self._reply(status, ctype, body)
        elif path == "/score-mos":
            status, ctype, body = self.service.score_mos(params)
            self._reply(status, ctype, body)
        elif path == "/voices":
            self._reply(200, "text/plain; charset=utf-8", self.service.voices_body())
        elif path == "/version":
            self._reply(200, "text/plain; charset=utf-8", self.service.version_body())
        else:
            self._reply(404, "text/plain; charset=utf-8", b"not found\n")

    def do_GET(self):
        query = urlsplit(self.path).query
        params = {k: v[0] for k, v in parse_qs(query, keep_blank_values=True).items()}
        self._route(params)

    def do_POST(self):
        length = int(self.headers.get("Content-Length", "0"))
        body = self.rfile.read(length).decode("utf-8")
        params = {k: v[0] for k, v in parse_qs(body, keep_blank_values=True).items()}
        self._route(params)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()


def make_server(service: TtsService, port: int = DEFAULT_PORT, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((host, port), _Handler)
    server.service = service  # type: ignore[attr-defined]
    return server
